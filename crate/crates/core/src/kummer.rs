//! Arboreal groups inside `(Z/NZ)² ⋊ GL₂(Z/NZ)` and the Kummer-side failures.
//!
//! An [`ArborealGroup`] is stored through the extension
//! `1 → V → G → H → 1`: the torsion projection `H` is enumerated, each
//! `h ∈ H` carries one lift `(τ(h), h)`, and the fiber `V` is the additive
//! span of the Schreier generators, kept per prime-power factor of `N`.
//! Membership and order follow without listing every element of `G`.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{self, GroupElement};
use crate::linalg::Ring;
use crate::matgroup::{Mat2, MatGroup, DEFAULT_CAP};
use crate::modulegen::Submodule;
use crate::residue::arith::{inv_mod, mul_mod, v_p};
use crate::residue::Modulus;

/// `(t, M)` with the law `(t1, M1)(t2, M2) = (t1 + M1 t2, M1 M2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ArborealElement {
    pub t: [u64; 2],
    pub m: Mat2,
}

impl ArborealElement {
    pub fn new(t: [i128; 2], m: Mat2) -> Self {
        let n = m.n as i128;
        Self {
            t: t.map(|x| x.rem_euclid(n) as u64),
            m,
        }
    }

    pub fn identity(n: u64) -> Self {
        Self {
            t: [0, 0],
            m: Mat2::identity(n),
        }
    }

    pub fn translation(t: [u64; 2], n: u64) -> Self {
        Self {
            t: [t[0] % n, t[1] % n],
            m: Mat2::identity(n),
        }
    }

    pub fn n(&self) -> u64 {
        self.m.n
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.m.n;
        let mt = self.m.act(o.t);
        Self {
            t: [(self.t[0] + mt[0]) % n, (self.t[1] + mt[1]) % n],
            m: self.m.mul(&o.m),
        }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.n() != o.n() {
            return Err(Error::ModulusMismatch(self.n(), o.n()));
        }
        Ok(self.mul(o))
    }

    pub fn inv(&self) -> Result<Self> {
        let mi = self.m.inv()?;
        let n = self.m.n;
        let w = mi.act(self.t);
        Ok(Self {
            t: [(n - w[0]) % n, (n - w[1]) % n],
            m: mi,
        })
    }

    pub fn reduce(&self, d: u64) -> Self {
        Self {
            t: [self.t[0] % d, self.t[1] % d],
            m: self.m.reduce(d),
        }
    }
}

impl GroupElement for ArborealElement {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inverse(&self) -> Self {
        self.inv().expect("arboreal elements have invertible matrices")
    }
}

/// One prime-power component of the Kummer fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberComponent {
    pub ell: u64,
    pub exponent: u32,
    pub module: Submodule,
}

/// A subgroup of `(Z/NZ)² ⋊ GL₂(Z/NZ)`.
#[derive(Debug, Clone)]
pub struct ArborealGroup {
    modulus: Modulus,
    generators: Vec<ArborealElement>,
    projection: MatGroup,
    lifts: Vec<[u64; 2]>,
    fiber: Vec<FiberComponent>,
}

fn crt_vec(parts: &[(u64, [u64; 2])], n: u64) -> [u64; 2] {
    let mut out = [0u64; 2];
    for &(q, v) in parts {
        let m = n / q;
        let c = if q == n { 1 % n } else { mul_mod(m, inv_mod(m % q, q).expect("coprime"), n) };
        for i in 0..2 {
            out[i] = (out[i] as u128 + mul_mod(v[i], c, n) as u128) as u64 % n;
        }
    }
    out
}

impl ArborealGroup {
    /// Closure of `generators` under the semidirect law; `cap` bounds the
    /// order of the torsion projection.
    pub fn generate(n: u64, generators: Vec<ArborealElement>, cap: usize) -> Result<Self> {
        let modulus = Modulus::new(n)?;
        for g in &generators {
            if g.n() != n {
                return Err(Error::ModulusMismatch(n, g.n()));
            }
            if !g.m.is_invertible() {
                return Err(Error::NonInvertible(n));
            }
        }
        let id = Mat2::identity(n);
        let mut lift: FxHashMap<Mat2, [u64; 2]> = FxHashMap::default();
        lift.insert(id, [0, 0]);
        let mut queue = VecDeque::from([id]);
        let mut schreier: Vec<[u64; 2]> = Vec::new();
        while let Some(q) = queue.pop_front() {
            let tq = lift[&q];
            for g in &generators {
                let prod = ArborealElement { t: tq, m: q }.mul(g);
                match lift.get(&prod.m) {
                    Some(&t) => {
                        let d = [(prod.t[0] + n - t[0]) % n, (prod.t[1] + n - t[1]) % n];
                        if d != [0, 0] {
                            schreier.push(d);
                        }
                    }
                    None => {
                        if lift.len() >= cap {
                            return Err(Error::GroupTooLarge { cap });
                        }
                        lift.insert(prod.m, prod.t);
                        queue.push_back(prod.m);
                    }
                }
            }
        }
        let mut proj_elems: Vec<Mat2> = lift.keys().copied().collect();
        proj_elems.sort_unstable();
        let lifts = proj_elems.iter().map(|m| lift[m]).collect();
        let mut proj_gens: Vec<Mat2> = generators.iter().map(|g| g.m).filter(|m| !m.is_identity()).collect();
        proj_gens.sort_unstable();
        proj_gens.dedup();
        let projection = MatGroup::from_parts(n, proj_gens, proj_elems)?;
        let fiber = modulus
            .factors()
            .iter()
            .map(|&(p, e)| {
                let ring = Ring::new(p, e)?;
                let q = ring.q;
                let rows: Vec<Vec<u64>> = schreier.iter().map(|d| vec![d[0] % q, d[1] % q]).collect();
                Ok(FiberComponent {
                    ell: p,
                    exponent: e,
                    module: Submodule::new(ring, 2, &rows),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            modulus,
            generators,
            projection,
            lifts,
            fiber,
        })
    }

    pub fn n(&self) -> u64 {
        self.modulus.value()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn generators(&self) -> &[ArborealElement] {
        &self.generators
    }

    pub fn torsion_projection(&self) -> &MatGroup {
        &self.projection
    }

    /// The fiber `{t : (t, Id) ∈ G}`, one component per prime power of `N`.
    pub fn kummer_fiber(&self) -> &[FiberComponent] {
        &self.fiber
    }

    pub fn fiber_component(&self, ell: u64) -> Option<&FiberComponent> {
        self.fiber.iter().find(|c| c.ell == ell)
    }

    pub fn fiber_order(&self) -> u128 {
        self.fiber.iter().map(|c| c.module.order()).product()
    }

    pub fn order(&self) -> u128 {
        self.projection.order() as u128 * self.fiber_order()
    }

    pub fn lift_of(&self, m: &Mat2) -> Option<[u64; 2]> {
        self.projection.index_of(m).map(|i| self.lifts[i])
    }

    pub fn fiber_contains(&self, t: [u64; 2]) -> bool {
        self.fiber.iter().all(|c| {
            let q = c.module.ring().q;
            c.module.contains(&[t[0] % q, t[1] % q])
        })
    }

    pub fn contains(&self, g: &ArborealElement) -> bool {
        let n = self.n();
        if g.n() != n {
            return false;
        }
        match self.lift_of(&g.m) {
            None => false,
            Some(t) => self.fiber_contains([(g.t[0] + n - t[0]) % n, (g.t[1] + n - t[1]) % n]),
        }
    }

    /// All fiber vectors in `(Z/NZ)²` (small groups only).
    pub fn fiber_elements(&self) -> Vec<[u64; 2]> {
        let n = self.n();
        let mut out: Vec<Vec<(u64, [u64; 2])>> = vec![vec![]];
        for c in &self.fiber {
            let q = c.module.ring().q;
            let elems = c.module.elements();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    elems.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push((q, [v[0], v[1]]));
                        p
                    })
                })
                .collect();
        }
        let mut res: Vec<[u64; 2]> = out.iter().map(|parts| crt_vec(parts, n)).collect();
        res.sort_unstable();
        res
    }

    /// Every element (small groups only).
    pub fn elements(&self) -> Vec<ArborealElement> {
        let n = self.n();
        let fib = self.fiber_elements();
        let mut out = Vec::with_capacity(self.order() as usize);
        for (m, t) in self.projection.elements().iter().zip(&self.lifts) {
            for f in &fib {
                out.push(ArborealElement {
                    t: [(t[0] + f[0]) % n, (t[1] + f[1]) % n],
                    m: *m,
                });
            }
        }
        out.sort_unstable();
        out
    }

    /// The group generated by the reductions of the generators modulo `d`.
    pub fn reduce_level(&self, d: u64) -> Result<ArborealGroup> {
        let n = self.n();
        if d == 0 || n % d != 0 {
            return Err(Error::NotDivisor(d, n));
        }
        let gens = self.generators.iter().map(|g| g.reduce(d)).collect();
        ArborealGroup::generate(d, gens, DEFAULT_CAP)
    }

    /// Reduction modulo `d` of the level-`N` fiber, per prime of `d`.
    pub fn fiber_at_reduced_level(&self, d: u64) -> Result<Vec<FiberComponent>> {
        let n = self.n();
        if d == 0 || n % d != 0 {
            return Err(Error::NotDivisor(d, n));
        }
        Modulus::new(d)?
            .factors()
            .iter()
            .map(|&(p, e)| {
                let c = self.fiber_component(p).expect("prime of d divides N");
                Ok(FiberComponent {
                    ell: p,
                    exponent: e,
                    module: c.module.reduce_to(e)?,
                })
            })
            .collect()
    }

    pub fn to_descriptor(&self) -> ArborealDescriptor {
        ArborealDescriptor {
            modulus: self.n(),
            generators: self
                .generators
                .iter()
                .map(|g| ArborealGeneratorDescriptor { t: g.t, m: g.m.e })
                .collect(),
        }
    }
}

fn component_order(parts: &[FiberComponent]) -> u128 {
    parts.iter().map(|c| c.module.order()).product()
}

fn exact_ratio(num: u128, den: u128, what: &str) -> Result<u128> {
    if den == 0 || num % den != 0 {
        return Err(Error::Inconsistent(format!("{what}: {num}/{den} is not an integer")));
    }
    Ok(num / den)
}

fn is_power_of(x: u128, ell: u64) -> bool {
    let mut x = x;
    while x > 1 && x % ell as u128 == 0 {
        x /= ell as u128;
    }
    x == 1
}

/// ℓ-adic and adelic failures of `G` at `ℓ | N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeFailure {
    pub ell: u64,
    pub n: u32,
    pub a: u128,
    pub b: u128,
}

/// `A_ℓ(N) = ℓ^{2n} / #V(G mod ℓ^n)` and `B_ℓ(N) = #V(G mod ℓ^n) / #(V_N mod ℓ^n)`.
pub fn failures(g: &ArborealGroup, ell: u64) -> Result<PrimeFailure> {
    let big_n = g.n();
    let n = v_p(big_n, ell).filter(|&v| v > 0).ok_or(Error::NotDivisor(ell, big_n))?;
    let q = ell.pow(n);
    let local = g.reduce_level(q)?;
    let local_fiber = local.fiber_order();
    let global_mod = component_order(&g.fiber_at_reduced_level(q)?);
    let full = (q as u128) * (q as u128);
    let a = exact_ratio(full, local_fiber, "A_ℓ")?;
    let b = exact_ratio(local_fiber, global_mod, "B_ℓ")?;
    if !is_power_of(a, ell) || !is_power_of(b, ell) {
        return Err(Error::Inconsistent(format!("failures at {ell} are not powers of {ell}")));
    }
    Ok(PrimeFailure { ell, n, a, b })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KummerReport {
    pub modulus: u64,
    pub degree: u128,
    pub torsion_order: usize,
    pub per_prime: Vec<PrimeFailure>,
    pub total_failure: u128,
    pub product_of_failures: u128,
    pub identity_holds: bool,
}

/// `N² / #V_N = ∏_{ℓ | N} A_ℓ(N) B_ℓ(N)`.
pub fn total_failure_identity_check(g: &ArborealGroup) -> Result<KummerReport> {
    let n = g.n();
    let degree = g.fiber_order();
    let total = exact_ratio((n as u128) * (n as u128), degree, "N²/#V_N")?;
    let per_prime = g
        .modulus
        .factors()
        .iter()
        .map(|&(p, _)| failures(g, p))
        .collect::<Result<Vec<_>>>()?;
    let product: u128 = per_prime.iter().map(|f| f.a * f.b).product();
    Ok(KummerReport {
        modulus: n,
        degree,
        torsion_order: g.projection.order(),
        per_prime,
        total_failure: total,
        product_of_failures: product,
        identity_holds: total == product,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RemarkNmReport {
    pub big_m: u64,
    pub n: u64,
    pub ratio_n: u128,
    pub ratio_m: u128,
    pub divides: bool,
}

/// `N² / #(V_M mod N)` divides `M² / #V_M` for `N | M`.
pub fn remark_nm_check(g: &ArborealGroup, n: u64) -> Result<RemarkNmReport> {
    let m = g.n();
    let reduced = component_order(&g.fiber_at_reduced_level(n)?);
    let ratio_n = exact_ratio((n as u128) * (n as u128), reduced, "N²/#V")?;
    let ratio_m = exact_ratio((m as u128) * (m as u128), g.fiber_order(), "M²/#V")?;
    Ok(RemarkNmReport {
        big_m: m,
        n,
        ratio_n,
        ratio_m,
        divides: ratio_m % ratio_n == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub checked: usize,
    pub holds: bool,
}

/// `(h t, Id) ∈ G` for every `h` in the projection and `t` in a fiber basis.
pub fn hn_stability_check(g: &ArborealGroup) -> StabilityReport {
    let n = g.n();
    let mut checked = 0;
    let mut holds = true;
    for c in &g.fiber {
        let q = c.module.ring().q;
        for h in g.projection.elements() {
            let hq = h.reduce(q);
            for t in c.module.basis() {
                checked += 1;
                let ht = hq.act([t[0], t[1]]);
                if !c.module.contains(&ht) {
                    holds = false;
                }
            }
        }
    }
    let _ = n;
    StabilityReport { checked, holds }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmReport {
    pub ell: u64,
    pub n: u32,
    pub order: u128,
    pub split_cartan_order: u128,
    pub index_in_split_cartan: u128,
    pub fiber_order: u128,
    pub reduced_level: u64,
    pub reduced_fiber_order: u128,
    pub reduced_fiber_index: u128,
    pub a_ell: u128,
    pub predicate_count: u128,
    pub closure_inside_predicate: bool,
    pub law_table_checked: bool,
    pub full_table_checked: bool,
}

fn primitive_root(ell: u64, n: u32) -> u64 {
    let q = ell.pow(n);
    let phi = q / ell * (ell - 1);
    let primes: Vec<u64> = crate::residue::arith::factorize(phi).iter().map(|&(p, _)| p).collect();
    (2..q)
        .find(|&g| {
            g % ell != 0 && primes.iter().all(|&p| crate::residue::arith::pow_mod(g, phi / p, q) != 1)
        })
        .expect("odd prime powers have primitive roots")
}

fn cm_predicate(x: &ArborealElement, ell: u64, n: u32) -> bool {
    let q = ell.pow(n);
    let s = ell.pow(n - 1);
    let [a, b, c, d] = x.m.e;
    b == 0 && c == 0 && a % ell != 0 && d % ell != 0 && x.t[1] % s == 0 && x.m.n == q
}

/// The group `B_{ℓ^n} = {(t, diag(d1, d2)) : t ≡ (*, 0) mod ℓ^{n−1}}`.
pub fn cm_counterexample(ell: u64, n: u32) -> Result<(ArborealGroup, CmReport)> {
    if ell == 2 || !crate::residue::arith::is_prime(ell) {
        return Err(Error::InvalidArgument(format!("{ell} is not an odd prime")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("level n must be at least 2".into()));
    }
    let q = crate::residue::arith::checked_pow(ell, n)?;
    let s = ell.pow(n - 1);
    let phi = (q / ell * (ell - 1)) as u128;
    if phi * phi > DEFAULT_CAP as u128 {
        return Err(Error::GroupTooLarge { cap: DEFAULT_CAP });
    }
    let g = primitive_root(ell, n);
    let gens = vec![
        ArborealElement::translation([1, 0], q),
        ArborealElement::translation([0, s], q),
        ArborealElement { t: [0, 0], m: Mat2::diag(g, 1, q) },
        ArborealElement { t: [0, 0], m: Mat2::diag(1, g, q) },
    ];
    let group = ArborealGroup::generate(q, gens, DEFAULT_CAP)?;

    // every generated element satisfies the predicate, checked lift by lift
    // and on a fiber basis, and the counts agree
    let fiber = &group.fiber[0].module;
    let inside = group
        .projection
        .elements()
        .iter()
        .zip(&group.lifts)
        .all(|(m, t)| cm_predicate(&ArborealElement { t: *t, m: *m }, ell, n))
        && fiber.basis().iter().all(|b| b[1] % s == 0);
    let predicate_count = (q as u128) * (ell as u128) * phi * phi;

    // the law only moves the second coordinate through t1_2 + d2 t2_2:
    // check it on every pair of admissible (t_2, d_2)
    let units: Vec<u64> = (1..q).filter(|x| x % ell != 0).collect();
    let t2s: Vec<u64> = (0..ell).map(|i| i * s).collect();
    let law_ok = t2s.iter().all(|&a| {
        units
            .iter()
            .all(|&d| t2s.iter().all(|&b| (a + mul_mod(d, b, q)) % q % s == 0))
    });

    let full_table = if group.order() <= 2_000 {
        let elems = group.elements();
        elems.iter().all(|x| {
            elems.iter().all(|y| {
                let z = x.mul(y);
                cm_predicate(&z, ell, n) && group.contains(&z)
            })
        })
    } else {
        false
    };

    let reduced = group.fiber_at_reduced_level(s)?;
    let reduced_order = component_order(&reduced);
    let split_order = (q as u128) * (q as u128) * phi * phi;
    let failure = failures(&group, ell)?;
    let report = CmReport {
        ell,
        n,
        order: group.order(),
        split_cartan_order: split_order,
        index_in_split_cartan: split_order / group.order(),
        fiber_order: group.fiber_order(),
        reduced_level: s,
        reduced_fiber_order: reduced_order,
        reduced_fiber_index: (s as u128) * (s as u128) / reduced_order,
        a_ell: failure.a,
        predicate_count,
        closure_inside_predicate: inside && predicate_count == group.order(),
        law_table_checked: law_ok,
        full_table_checked: full_table,
    };
    Ok((group, report))
}

pub fn semidirect_mul(a: &ArborealElement, b: &ArborealElement) -> Result<ArborealElement> {
    a.try_mul(b)
}

pub fn semidirect_inv(a: &ArborealElement) -> Result<ArborealElement> {
    a.inv()
}

pub fn close_arboreal(n: u64, generators: Vec<ArborealElement>, cap: usize) -> Result<ArborealGroup> {
    ArborealGroup::generate(n, generators, cap)
}

pub fn torsion_projection(g: &ArborealGroup) -> &MatGroup {
    g.torsion_projection()
}

pub fn kummer_fiber(g: &ArborealGroup) -> &[FiberComponent] {
    g.kummer_fiber()
}

pub fn fiber_at_reduced_level(g: &ArborealGroup, d: u64) -> Result<Vec<FiberComponent>> {
    g.fiber_at_reduced_level(d)
}

/// JSON arboreal descriptor: `{"modulus": N, "generators": [{"t": [x,y], "m": [a,b,c,d]}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArborealDescriptor {
    pub modulus: u64,
    pub generators: Vec<ArborealGeneratorDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArborealGeneratorDescriptor {
    pub t: [u64; 2],
    pub m: [u64; 4],
}

impl ArborealDescriptor {
    pub fn build(&self, cap: usize) -> Result<ArborealGroup> {
        let n = self.modulus;
        Modulus::new(n)?;
        let gens = self
            .generators
            .iter()
            .map(|g| ArborealElement {
                t: [g.t[0] % n, g.t[1] % n],
                m: Mat2::from_u64(g.m, n),
            })
            .collect();
        ArborealGroup::generate(n, gens, cap)
    }
}

/// The arboreal group `(Z/NZ)² ⋊ H`.
pub fn full_over(h: &MatGroup) -> Result<ArborealGroup> {
    let n = h.n();
    let mut gens = vec![
        ArborealElement::translation([1, 0], n),
        ArborealElement::translation([0, 1], n),
    ];
    gens.extend(h.generators().iter().map(|m| ArborealElement { t: [0, 0], m: *m }));
    ArborealGroup::generate(n, gens, DEFAULT_CAP)
}

/// Brute-force closure under the semidirect law (small groups only).
pub fn brute_force_closure(n: u64, gens: &[ArborealElement], cap: usize) -> Result<Vec<ArborealElement>> {
    group::closure(ArborealElement::identity(n), gens, cap)
}
