//! Exact cyclotomic arithmetic.
//!
//! [`CycScalar`] is an element of the cyclotomic field `Q(ζ_M)` for an even
//! order `M`, stored as rational coefficients over the exponent basis
//! `ζ_M^0 ... ζ_M^{M-1}`. Addition, multiplication and conjugation act on
//! exponents directly (`ζ^M = 1`), so no reduction is needed until equality is
//! asked for; zero-testing and serialization reduce to the canonical power
//! basis of degree `φ(M)` modulo the `M`-th cyclotomic polynomial, which makes
//! equality decidable. The reduction rows `x^j mod Φ_M` are cached per order.
//!
//! [`RadScalar`] carries an additional symbolic factor `√m / denom`, which is
//! how the `1/√|Z(G)|` prefactors of the Gauss sums and of the `S` matrices
//! stay exact through matrix algebra. The radical is folded into the
//! cyclotomic part (via the classical quadratic Gauss sum, which realises
//! `√p` inside `Q(ζ_{4p})`) only when two scalars are compared.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::ratmat::{rat, rem_mod, Rat};
use crate::{Error, Result};

const MAX_ORDER: u64 = 1 << 20;

// ---------------------------------------------------------------------------
// Integer polynomial helpers and cyclotomic polynomial cache
// ---------------------------------------------------------------------------

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Exact division of integer polynomials; `den` must be monic and divide `num`.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for (i, di) in den.iter().enumerate() {
                rem[k + i] -= &c * di;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

fn cyclotomic_poly(n: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        // x^n - 1 divided by the product of Φ_d over proper divisors d.
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        let mut den = vec![BigInt::one()];
        for d in 1..=n / 2 {
            if n.is_multiple_of(d) {
                den = poly_mul(&den, &cyclotomic_poly(d, memo));
            }
        }
        poly_div_exact(&num, &den)
    };
    memo.insert(n, poly.clone());
    poly
}

struct CycTable {
    phi: usize,
    /// `rows[j]` holds the coefficients of `x^{phi+j} mod Φ_M`, `j < M - phi`.
    rows: Vec<Vec<BigInt>>,
}

fn table(order: u64) -> Arc<CycTable> {
    static TABLES: OnceLock<Mutex<HashMap<u64, Arc<CycTable>>>> = OnceLock::new();
    static POLYS: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&order) {
        return t.clone();
    }
    let phi_poly = {
        let mut memo = POLYS.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
        cyclotomic_poly(order, &mut memo)
    };
    let phi = phi_poly.len() - 1;
    // x^phi ≡ -(lower part of Φ); then iterate x^{j+1} = x * x^j mod Φ.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(order as usize - phi);
    let mut cur: Vec<BigInt> = (0..phi).map(|k| -phi_poly[k].clone()).collect();
    rows.push(cur.clone());
    for _ in 1..(order as usize - phi) {
        let lead = cur[phi - 1].clone();
        let mut next = vec![BigInt::zero(); phi];
        next[1..phi].clone_from_slice(&cur[..phi - 1]);
        if !lead.is_zero() {
            for k in 0..phi {
                next[k] -= &lead * &phi_poly[k];
            }
        }
        rows.push(next.clone());
        cur = next;
    }
    let t = Arc::new(CycTable { phi, rows });
    tables.lock().unwrap().insert(order, t.clone());
    t
}

// ---------------------------------------------------------------------------
// CycScalar
// ---------------------------------------------------------------------------

/// Exact element of the cyclotomic field of even order `M`.
#[derive(Clone)]
pub struct CycScalar {
    order: u64,
    /// Coefficients over the exponent basis `ζ_M^k`, length `M`.
    coeffs: Vec<Rat>,
}

impl CycScalar {
    pub fn zero() -> Self {
        CycScalar { order: 2, coeffs: vec![Rat::zero(); 2] }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(c: Rat) -> Self {
        CycScalar { order: 2, coeffs: vec![c, Rat::zero()] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat(n))
    }

    /// `ζ_M^k` for even `M`.
    pub fn root_of_unity(order: u64, exponent: u64) -> Self {
        assert!(order >= 2 && order.is_multiple_of(2) && order <= MAX_ORDER, "bad order {order}");
        let mut coeffs = vec![Rat::zero(); order as usize];
        coeffs[(exponent % order) as usize] = Rat::one();
        CycScalar { order, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            return true;
        }
        self.canonical_coeffs().iter().all(|c| c.is_zero())
    }

    /// Coefficients over the canonical power basis `1, ζ, ..., ζ^{φ(M)-1}`.
    pub fn canonical_coeffs(&self) -> Vec<Rat> {
        let t = table(self.order);
        let mut out: Vec<Rat> = self.coeffs[..t.phi.min(self.coeffs.len())].to_vec();
        out.resize(t.phi, Rat::zero());
        for (j, c) in self.coeffs.iter().enumerate().skip(t.phi) {
            if c.is_zero() {
                continue;
            }
            for (k, rk) in t.rows[j - t.phi].iter().enumerate() {
                if !rk.is_zero() {
                    out[k] += c * Rat::from_integer(rk.clone());
                }
            }
        }
        out
    }

    /// The element as a rational number, when it is one.
    pub fn as_rational(&self) -> Option<Rat> {
        let can = self.canonical_coeffs();
        if can.iter().skip(1).all(|c| c.is_zero()) {
            Some(can[0].clone())
        } else {
            None
        }
    }

    fn embed(&self, order: u64) -> CycScalar {
        assert!(order.is_multiple_of(self.order));
        if order == self.order {
            return self.clone();
        }
        let f = (order / self.order) as usize;
        let mut coeffs = vec![Rat::zero(); order as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[k * f] = c.clone();
            }
        }
        CycScalar { order, coeffs }
    }

    /// Relabel through a smaller field when every exponent allows it.
    fn shrink(mut self) -> CycScalar {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            return CycScalar::zero();
        }
        let mut g = self.order;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&(k as u64));
                if g == 1 {
                    return self;
                }
            }
        }
        let mut new_order = self.order / g;
        if new_order % 2 == 1 {
            // keep the order even
            if g.is_multiple_of(2) {
                new_order *= 2;
            } else {
                return self;
            }
        }
        if new_order >= self.order || new_order < 2 {
            return self;
        }
        let f = (self.order / new_order) as usize;
        let mut coeffs = vec![Rat::zero(); new_order as usize];
        for (k, c) in self.coeffs.iter_mut().enumerate() {
            if !c.is_zero() {
                coeffs[k / f] = std::mem::take(c);
            }
        }
        CycScalar { order: new_order, coeffs }
    }

    pub fn add(&self, other: &CycScalar) -> CycScalar {
        let order = self.order.lcm(&other.order);
        assert!(order <= MAX_ORDER, "cyclotomic order overflow");
        let mut a = self.embed(order);
        let b = other.embed(order);
        for (ca, cb) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *ca += cb;
        }
        a.shrink()
    }

    pub fn neg(&self) -> CycScalar {
        CycScalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &CycScalar) -> CycScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycScalar) -> CycScalar {
        let order = self.order.lcm(&other.order);
        assert!(order <= MAX_ORDER, "cyclotomic order overflow");
        let a = self.embed(order);
        let b = other.embed(order);
        let m = order as usize;
        let mut coeffs = vec![Rat::zero(); m];
        let bn: Vec<(usize, &Rat)> =
            b.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, ci) in a.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in &bn {
                let k = (i + j) % m;
                coeffs[k] += ci * *cj;
            }
        }
        (CycScalar { order, coeffs }).shrink()
    }

    pub fn scale(&self, s: &Rat) -> CycScalar {
        CycScalar { order: self.order, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Complex conjugation (negates every exponent).
    pub fn conj(&self) -> CycScalar {
        let m = self.order as usize;
        let mut coeffs = vec![Rat::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[(m - k) % m] = c.clone();
            }
        }
        CycScalar { order: self.order, coeffs }
    }

    pub fn pow(&self, mut n: u64) -> CycScalar {
        let mut base = self.clone();
        let mut acc = CycScalar::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eq_exact(&self, other: &CycScalar) -> bool {
        self.sub(other).is_zero()
    }

    /// Numerical value via root-of-unity evaluation with compensated summation.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.order as f64;
        let (mut sre, mut cre) = (0.0f64, 0.0f64);
        let (mut sim, mut cim) = (0.0f64, 0.0f64);
        let kahan = |sum: &mut f64, comp: &mut f64, term: f64| {
            let y = term - *comp;
            let t = *sum + y;
            *comp = (t - *sum) - y;
            *sum = t;
        };
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64().unwrap();
            let ang = std::f64::consts::TAU * (k as f64) / m;
            let (s, co) = ang.sin_cos();
            kahan(&mut sre, &mut cre, cf * co);
            kahan(&mut sim, &mut cim, cf * s);
        }
        Complex64::new(sre, sim)
    }

    /// Exact JSON form: order plus canonical coefficients as fraction strings.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<String> =
            self.canonical_coeffs().iter().map(|c| c.to_string()).collect();
        serde_json::json!({ "order": self.order, "coeffs": coeffs })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CycScalar> {
        let order = v
            .get("order")
            .and_then(|o| o.as_u64())
            .ok_or_else(|| Error::Parse("missing cyclotomic order".into()))?;
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?;
        if order < 2 || order % 2 != 0 || order > MAX_ORDER {
            return Err(Error::Parse(format!("bad order {order}")));
        }
        let mut out = vec![Rat::zero(); order as usize];
        for (k, c) in coeffs.iter().enumerate() {
            let s = c.as_str().ok_or_else(|| Error::Parse("coefficient must be a string".into()))?;
            let r: Rat = s.parse().map_err(|_| Error::Parse(format!("bad fraction {s}")))?;
            if k >= out.len() {
                return Err(Error::Parse("too many coefficients".into()));
            }
            out[k] = r;
        }
        Ok((CycScalar { order, coeffs: out }).shrink())
    }
}

impl std::fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

impl std::fmt::Display for CycScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let can = self.canonical_coeffs();
        let mut first = true;
        for (k, c) in can.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                // ζ_M^k = e^{iπ·2k/M}
                let e = Rat::new(BigInt::from(2 * k as u64), BigInt::from(self.order));
                if c.is_one() {
                    write!(f, "e^{{iπ·{e}}}")?;
                } else {
                    write!(f, "{c}·e^{{iπ·{e}}}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

/// `e^{iπq}` as an exact root of unity.
pub fn phase(q: &Rat) -> CycScalar {
    let q2 = rem_mod(q, 2);
    let b = q2.denom().to_u64().expect("phase denominator too large");
    let a = q2.numer().to_u64().expect("phase numerator in [0,2) has small numerator");
    // e^{iπ a/b} = ζ_{2b}^a
    CycScalar::root_of_unity(2 * b, a).shrink()
}

pub fn phase_int(num: i64, den: i64) -> CycScalar {
    phase(&crate::ratmat::frac(num, den))
}

/// `√m` as an exact cyclotomic number, for `m ≥ 1`.
///
/// Built multiplicatively from primes: `√2 = ζ₈ + ζ₈⁻¹`, and for odd `p` the
/// classical Gauss sum `Σ_k e^{2πik²/p}` equals `√p` (`p ≡ 1 mod 4`) or
/// `i√p` (`p ≡ 3 mod 4`).
pub fn fold_sqrt(m: u64) -> Result<CycScalar> {
    static CACHE: OnceLock<Mutex<HashMap<u64, CycScalar>>> = OnceLock::new();
    if m == 0 {
        return Err(Error::Domain("square root of zero order".into()));
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return Ok(v.clone());
    }
    let mut square_part: u64 = 1;
    let mut rest = m;
    let mut out = CycScalar::one();
    let mut p: u64 = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            square_part *= p.pow(e / 2);
            if e % 2 == 1 {
                out = out.mul(&sqrt_prime(p));
            }
        }
        p += 1;
    }
    if rest > 1 {
        out = out.mul(&sqrt_prime(rest));
    }
    out = out.scale(&rat(square_part as i64));
    cache.lock().unwrap().insert(m, out.clone());
    Ok(out)
}

fn sqrt_prime(p: u64) -> CycScalar {
    if p == 2 {
        let a = CycScalar::root_of_unity(8, 1);
        let b = CycScalar::root_of_unity(8, 7);
        return a.add(&b);
    }
    // Σ_{k=0}^{p-1} ζ_{2p}^{2k²}
    let order = 2 * p;
    let mut coeffs = vec![Rat::zero(); order as usize];
    for k in 0..p {
        let e = ((2 * ((k * k) % order)) % order) as usize;
        coeffs[e] += Rat::one();
    }
    let g = CycScalar { order, coeffs };
    if p % 4 == 1 {
        g
    } else {
        // √p = -i · (i√p)
        let minus_i = CycScalar::root_of_unity(4, 3);
        g.mul(&minus_i)
    }
}

// ---------------------------------------------------------------------------
// RadScalar
// ---------------------------------------------------------------------------

/// `cyc · √rad / denom` with `rad` squarefree positive and `denom` positive.
#[derive(Clone)]
pub struct RadScalar {
    pub cyc: CycScalar,
    pub rad: u64,
    pub denom: BigInt,
}

impl RadScalar {
    pub fn zero() -> Self {
        RadScalar { cyc: CycScalar::zero(), rad: 1, denom: BigInt::one() }
    }

    pub fn one() -> Self {
        RadScalar { cyc: CycScalar::one(), rad: 1, denom: BigInt::one() }
    }

    pub fn from_cyc(cyc: CycScalar) -> Self {
        RadScalar { cyc, rad: 1, denom: BigInt::one() }
    }

    /// `1/√k = √k' / (f·k')` where `k = f²·k'` with `k'` squarefree.
    pub fn inv_sqrt(k: u64) -> Self {
        assert!(k >= 1);
        let mut f = 1u64;
        let mut rest = k;
        let mut p = 2u64;
        while p * p <= rest {
            while rest.is_multiple_of(p * p) {
                rest /= p * p;
                f *= p;
            }
            p += 1;
        }
        RadScalar { cyc: CycScalar::one(), rad: rest, denom: BigInt::from(f * rest) }
    }

    pub fn is_zero(&self) -> bool {
        self.cyc.is_zero()
    }

    pub fn mul(&self, other: &RadScalar) -> RadScalar {
        let g = self.rad.gcd(&other.rad);
        let rad = (self.rad / g) * (other.rad / g);
        let mut cyc = self.cyc.mul(&other.cyc);
        if g > 1 {
            cyc = cyc.scale(&rat(g as i64));
        }
        RadScalar { cyc, rad, denom: &self.denom * &other.denom }
    }

    pub fn add(&self, other: &RadScalar) -> RadScalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.rad == other.rad {
            let l = self.denom.lcm(&other.denom);
            let fa = Rat::from_integer(&l / &self.denom);
            let fb = Rat::from_integer(&l / &other.denom);
            RadScalar {
                cyc: self.cyc.scale(&fa).add(&other.cyc.scale(&fb)),
                rad: self.rad,
                denom: l,
            }
        } else {
            RadScalar::from_cyc(self.normalize().add(&other.normalize()))
        }
    }

    pub fn neg(&self) -> RadScalar {
        RadScalar { cyc: self.cyc.neg(), rad: self.rad, denom: self.denom.clone() }
    }

    pub fn sub(&self, other: &RadScalar) -> RadScalar {
        self.add(&other.neg())
    }

    pub fn conj(&self) -> RadScalar {
        RadScalar { cyc: self.cyc.conj(), rad: self.rad, denom: self.denom.clone() }
    }

    pub fn scale(&self, s: &Rat) -> RadScalar {
        RadScalar { cyc: self.cyc.scale(s), rad: self.rad, denom: self.denom.clone() }
    }

    /// Fold the radical and the denominator into the cyclotomic part.
    pub fn normalize(&self) -> CycScalar {
        let mut out = self.cyc.clone();
        if self.rad > 1 {
            out = out.mul(&fold_sqrt(self.rad).expect("rad >= 1"));
        }
        if !self.denom.is_one() {
            out = out.scale(&Rat::new(BigInt::one(), self.denom.clone()));
        }
        out
    }

    pub fn eq_exact(&self, other: &RadScalar) -> bool {
        self.sub(other).is_zero() || self.normalize().eq_exact(&other.normalize())
    }

    pub fn to_complex(&self) -> Complex64 {
        self.cyc.to_complex() * (self.rad as f64).sqrt()
            / self.denom.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cyc": self.cyc.to_json(),
            "rad": self.rad,
            "denom": self.denom.to_string(),
        })
    }
}

impl PartialEq for RadScalar {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

impl std::fmt::Display for RadScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.rad == 1 && self.denom.is_one() {
            write!(f, "{}", self.cyc)
        } else {
            write!(f, "({})·√{}/{}", self.cyc, self.rad, self.denom)
        }
    }
}

impl std::fmt::Debug for RadScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}
