//! Exact arithmetic in Z/NZ and finite-precision p-adic helpers.
//!
//! Every value here is an ordinary integer reduced modulo `N < 2^63`; products
//! are formed in 128-bit arithmetic. The p-adic routines (`padic_log`,
//! `padic_exp`, `mth_root_in_unit_group`) evaluate truncated power series with
//! exact valuation bookkeeping, never floating point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1 << 63;

/// Low-level modular helpers shared by the rest of the crate.
pub mod arith {
    use crate::error::{Error, Result};

    #[inline]
    pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
        ((a as u128 * b as u128) % n as u128) as u64
    }

    #[inline]
    pub fn add_mod(a: u64, b: u64, n: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % n as u128) as u64
    }

    #[inline]
    pub fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
        let a = a % n;
        let b = b % n;
        if a >= b {
            a - b
        } else {
            n - (b - a)
        }
    }

    #[inline]
    pub fn neg_mod(a: u64, n: u64) -> u64 {
        sub_mod(0, a, n)
    }

    /// Reduce a signed integer into `[0, n)`.
    #[inline]
    pub fn reduce_i128(a: i128, n: u64) -> u64 {
        a.rem_euclid(n as i128) as u64
    }

    pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
        if n == 1 {
            return 0;
        }
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, base, n);
            }
            base = mul_mod(base, base, n);
            exp >>= 1;
        }
        acc
    }

    pub fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }

    pub fn lcm(a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        a / gcd(a, b) * b
    }

    pub fn inv_mod(a: u64, n: u64) -> Result<u64> {
        if n == 1 {
            return Ok(0);
        }
        let (mut old_r, mut r) = ((a % n) as i128, n as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return Err(Error::NotUnit(a % n, n));
        }
        Ok(reduce_i128(old_s, n))
    }

    /// p-adic valuation of a positive integer; `None` for zero.
    pub fn v_p(mut x: u64, p: u64) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        Some(v)
    }

    /// `p^e`, or an overflow error when the result reaches 2^63.
    pub fn checked_pow(p: u64, e: u32) -> Result<u64> {
        let mut acc: u64 = 1;
        for _ in 0..e {
            acc = acc
                .checked_mul(p)
                .filter(|&x| x < super::MAX_MODULUS)
                .ok_or_else(|| Error::Overflow(format!("{p}^{e} exceeds 2^63")))?;
        }
        Ok(acc)
    }

    pub fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2u64;
        while d.saturating_mul(d) <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2u64;
        while d.saturating_mul(d) <= n {
            if n % d == 0 {
                let mut e = 0;
                while n % d == 0 {
                    n /= d;
                    e += 1;
                }
                out.push((d, e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }
}

use arith::*;

/// A modulus `N` together with its factorisation into prime powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(value: u64) -> Result<Self> {
        if value == 0 || value >= MAX_MODULUS {
            return Err(Error::InvalidModulus(value as u128));
        }
        Ok(Self {
            value,
            factors: factorize(value),
        })
    }

    pub fn prime_power(p: u64, k: u32) -> Result<Self> {
        Self::new(checked_pow(p, k)?)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Prime factorisation, primes ascending.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The exponent `k` if this modulus is `p^k`.
    pub fn exponent_of(&self, p: u64) -> Option<u32> {
        match self.factors.as_slice() {
            [] => Some(0),
            [(q, k)] if *q == p => Some(*k),
            _ => None,
        }
    }

    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, k)| p.pow(k))
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// An element of Z/NZ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: i128, modulus: &Modulus) -> Self {
        Self {
            value: reduce_i128(value, modulus.value),
            modulus: modulus.clone(),
        }
    }

    pub fn from_u64(value: u64, modulus: &Modulus) -> Self {
        Self {
            value: value % modulus.value,
            modulus: modulus.clone(),
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    fn check(&self, other: &Self) -> Result<u64> {
        if self.modulus.value != other.modulus.value {
            return Err(Error::ModulusMismatch(self.modulus.value, other.modulus.value));
        }
        Ok(self.modulus.value)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        Ok(Self::from_u64(add_mod(self.value, other.value, n), &self.modulus))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        Ok(Self::from_u64(sub_mod(self.value, other.value, n), &self.modulus))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        Ok(Self::from_u64(mul_mod(self.value, other.value, n), &self.modulus))
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::from_u64(pow_mod(self.value, e, self.modulus.value), &self.modulus)
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self::from_u64(inv_mod(self.value, self.modulus.value)?, &self.modulus))
    }

    pub fn is_unit(&self) -> bool {
        gcd(self.value, self.modulus.value) == 1
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.value)
    }
}

/// ℓ-adic valuation at finite precision. Zero modulo `ℓ^k` has the `Full`
/// valuation `k`, which callers read as "at least k".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Exact(u32),
    Full(u32),
}

impl Valuation {
    pub fn get(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::Full(v) => v,
        }
    }

    pub fn is_full(self) -> bool {
        matches!(self, Valuation::Full(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::Full(v) => write!(f, "{v} (full)"),
        }
    }
}

fn exponent_for(x: &Residue, ell: u64) -> Result<u32> {
    x.modulus
        .exponent_of(ell)
        .ok_or(Error::NotPrimePower(x.modulus.value, ell))
}

/// ℓ-adic valuation of a residue modulo a power of ℓ.
pub fn vl(x: &Residue, ell: u64) -> Result<Valuation> {
    let k = exponent_for(x, ell)?;
    Ok(match v_p(x.value, ell) {
        None => Valuation::Full(k),
        Some(v) => Valuation::Exact(v),
    })
}

/// Teichmüller lift of a unit `a mod ℓ` to precision `ℓ^k`: the unique
/// `λ ≡ a (mod ℓ)` with `λ^ℓ = λ`, reached by iterating `x ↦ x^ℓ`.
pub fn teichmuller(a: &Residue, k: u32) -> Result<Residue> {
    let ell = a.modulus.value;
    if !is_prime(ell) {
        return Err(Error::InvalidArgument(format!(
            "teichmuller expects a residue modulo a prime, got modulus {ell}"
        )));
    }
    if a.value == 0 {
        return Err(Error::Domain(format!("0 mod {ell} has no Teichmüller lift")));
    }
    let target = Modulus::prime_power(ell, k)?;
    let q = target.value;
    let mut x = a.value % q;
    for _ in 0..=k {
        let next = pow_mod(x, ell, q);
        if next == x {
            return Ok(Residue::from_u64(x, &target));
        }
        x = next;
    }
    unreachable!("x -> x^ell stabilises after at most k steps")
}

fn check_working_modulus(p: u64, e: u32) -> Result<u64> {
    checked_pow(p, e)
}

fn ceil_log(p: u64, i: u64) -> u32 {
    let mut e = 0;
    let mut acc: u128 = 1;
    while acc < i as u128 {
        acc *= p as u128;
        e += 1;
    }
    e
}

/// `log(1 + a)` modulo `p^k` for an integer `a` with `v_p(a) ≥ 1` (`≥ 2` when
/// `p = 2`).
fn log_series(a: u64, p: u64, k: u32) -> Result<u64> {
    let q = checked_pow(p, k)?;
    let Some(va) = v_p(a, p) else {
        return Ok(0);
    };
    let mut sum = 0u64;
    let mut i: u64 = 1;
    loop {
        // for j >= i, v_p(a^j / j) >= j*va - log_p(j) >= k once this holds
        if (i as u128) * va as u128 >= k as u128 + ceil_log(p, i) as u128 {
            break;
        }
        let vi = v_p(i, p).unwrap();
        let work = check_working_modulus(p, k + vi)?;
        let num = pow_mod(a, i, work);
        let scale = p.pow(vi);
        debug_assert_eq!(num % scale, 0);
        let unit = inv_mod((i / scale) % q, q)?;
        let term = mul_mod((num / scale) % q, unit, q);
        sum = if i % 2 == 1 {
            add_mod(sum, term, q)
        } else {
            sub_mod(sum, term, q)
        };
        i += 1;
    }
    Ok(sum)
}

/// `v_p(i!)` by Legendre's formula.
fn v_factorial(i: u64, p: u64) -> u32 {
    let mut v = 0u64;
    let mut pk = p;
    while pk <= i {
        v += i / pk;
        match pk.checked_mul(p) {
            Some(x) => pk = x,
            None => break,
        }
    }
    v as u32
}

fn exp_series(y: u64, p: u64, k: u32) -> Result<u64> {
    let q = checked_pow(p, k)?;
    let Some(vy) = v_p(y, p) else {
        return Ok(1 % q);
    };
    let mut sum = 1 % q;
    let mut unit_fact = 1u64; // unit part of i! modulo q
    let mut i: u64 = 1;
    loop {
        // v_p(i!) <= (i-1)/(p-1), so v_p(y^i/i!) >= i*vy - (i-1)/(p-1)
        let lhs = (i as u128) * vy as u128 * (p as u128 - 1);
        let rhs = k as u128 * (p as u128 - 1) + (i as u128 - 1);
        if lhs >= rhs {
            break;
        }
        let mut ip = i;
        while ip % p == 0 {
            ip /= p;
        }
        unit_fact = mul_mod(unit_fact, ip % q, q);
        let vf = v_factorial(i, p);
        let work = check_working_modulus(p, k + vf)?;
        let num = pow_mod(y, i, work);
        let scale = p.pow(vf);
        debug_assert_eq!(num % scale, 0);
        let term = mul_mod((num / scale) % q, inv_mod(unit_fact, q)?, q);
        sum = add_mod(sum, term, q);
        i += 1;
    }
    Ok(sum)
}

fn unit_group_floor(p: u64) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// Truncated p-adic logarithm on `1 + p Z_p` (`1 + 4 Z_2` when `p = 2`).
pub fn padic_log(x: &Residue, p: u64) -> Result<Residue> {
    let k = exponent_for(x, p)?;
    let a = sub_mod(x.value, 1, x.modulus.value);
    if let Some(va) = v_p(a, p) {
        if va < unit_group_floor(p).min(k) {
            return Err(Error::Domain(format!(
                "log needs x ≡ 1 mod {}, got {x}",
                p.pow(unit_group_floor(p))
            )));
        }
    }
    Ok(Residue::from_u64(log_series(a, p, k)?, &x.modulus))
}

/// Truncated p-adic exponential on `p Z_p` (`4 Z_2` when `p = 2`).
pub fn padic_exp(y: &Residue, p: u64) -> Result<Residue> {
    let k = exponent_for(y, p)?;
    if let Some(vy) = v_p(y.value, p) {
        if vy < unit_group_floor(p).min(k) {
            return Err(Error::Domain(format!(
                "exp needs v_p(y) >= {}, got {y}",
                unit_group_floor(p)
            )));
        }
    }
    Ok(Residue::from_u64(exp_series(y.value, p, k)?, &y.modulus))
}

/// An `M`-th root of `y ∈ U_{n + v_p(M)}` lying in `U_n`, computed as
/// `exp(M^{-1} log y)`.
pub fn mth_root_in_unit_group(y: &Residue, m: u64, n: u32) -> Result<Residue> {
    let modulus = y.modulus.clone();
    let (p, k) = match modulus.factors() {
        [(p, k)] => (*p, *k),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "modulus {} is not a prime power",
                modulus.value
            )))
        }
    };
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    if n < unit_group_floor(p) {
        return Err(Error::InvalidArgument(format!(
            "level n = {n} too small for p = {p}"
        )));
    }
    let vm = v_p(m, p).unwrap();
    let a = sub_mod(y.value, 1, modulus.value);
    if let Some(va) = v_p(a, p) {
        if va < (n + vm).min(k) {
            return Err(Error::Domain(format!(
                "{y} is not in U_{}",
                n + vm
            )));
        }
    }
    let q = modulus.value;
    // log y to precision p^(k + v_p(M)) so the division by p^v_p(M) is exact mod p^k
    let log_hi = log_series(a, p, k + vm)?;
    let pv = p.pow(vm);
    debug_assert_eq!(log_hi % pv, 0);
    let unit = m / pv;
    let quotient = mul_mod((log_hi / pv) % q, inv_mod(unit % q, q)?, q);
    let x = exp_series(quotient, p, k)?;
    debug_assert_eq!(pow_mod(x, m, q), y.value);
    Ok(Residue::from_u64(x, &modulus))
}

/// Chinese-remainder decomposition into prime-power components, primes ascending.
pub fn crt_split(x: &Residue) -> Vec<(u64, Residue)> {
    x.modulus
        .prime_powers()
        .map(|q| {
            let m = Modulus::new(q).expect("prime power below the parent modulus");
            (q, Residue::from_u64(x.value % q, &m))
        })
        .collect()
}

/// Inverse of [`crt_split`]; moduli must be pairwise coprime.
pub fn crt_join(parts: &[(u64, Residue)]) -> Result<Residue> {
    let mut n: u64 = 1;
    let mut acc: u64 = 0;
    for (q, r) in parts {
        if r.modulus.value != *q {
            return Err(Error::ModulusMismatch(*q, r.modulus.value));
        }
        if gcd(n, *q) != 1 {
            return Err(Error::InvalidArgument(format!(
                "CRT moduli {n} and {q} are not coprime"
            )));
        }
        let new_n = (n as u128 * *q as u128) as u128;
        if new_n >= MAX_MODULUS as u128 {
            return Err(Error::Overflow("CRT modulus exceeds 2^63".into()));
        }
        let new_n = new_n as u64;
        // acc + n*t ≡ r (mod q)
        let t = mul_mod(sub_mod(r.value, acc % q, *q), inv_mod(n % q, *q)?, *q);
        acc = add_mod(acc, mul_mod(n, t, new_n), new_n);
        n = new_n;
    }
    Ok(Residue::from_u64(acc, &Modulus::new(n)?))
}
