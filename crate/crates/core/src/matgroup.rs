//! 2×2 matrices over Z/NZ and fully enumerated matrix groups.
//!
//! A [`MatGroup`] stores its generators and the sorted list of all its
//! elements; membership is a binary search. Groups are capped at
//! [`DEFAULT_CAP`] elements unless a caller passes a different cap.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{self, GroupElement};
use crate::linalg::Ring;
use crate::modulegen::Submodule;
use crate::residue::arith::{gcd, inv_mod, is_prime, lcm, pow_mod, reduce_i128, v_p};
use crate::residue::{Modulus, MAX_MODULUS};

pub const DEFAULT_CAP: usize = 2_000_000;

/// Row-major `[a, b, c, d]` for `(a b; c d)` modulo `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Mat2 {
    pub e: [u64; 4],
    pub n: u64,
}

#[inline]
fn dot(a: u64, b: u64, c: u64, d: u64, n: u64) -> u64 {
    if n < (1 << 31) {
        (a * b + c * d) % n
    } else {
        ((a as u128 * b as u128 + c as u128 * d as u128) % n as u128) as u64
    }
}

impl Mat2 {
    pub fn new(e: [i128; 4], n: u64) -> Self {
        debug_assert!(n > 0 && n < MAX_MODULUS);
        Self {
            e: e.map(|x| reduce_i128(x, n)),
            n,
        }
    }

    pub fn from_u64(e: [u64; 4], n: u64) -> Self {
        Self {
            e: e.map(|x| x % n),
            n,
        }
    }

    pub fn identity(n: u64) -> Self {
        Self::from_u64([1, 0, 0, 1], n)
    }

    pub fn scalar(lambda: u64, n: u64) -> Self {
        Self::from_u64([lambda, 0, 0, lambda], n)
    }

    pub fn diag(a: u64, d: u64, n: u64) -> Self {
        Self::from_u64([a, 0, 0, d], n)
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        let n = self.n;
        let [a, b, c, d] = self.e;
        let [x, y, z, w] = o.e;
        Self {
            e: [
                dot(a, x, b, z, n),
                dot(a, y, b, w, n),
                dot(c, x, d, z, n),
                dot(c, y, d, w, n),
            ],
            n,
        }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::ModulusMismatch(self.n, o.n));
        }
        Ok(self.mul(o))
    }

    pub fn det(&self) -> u64 {
        let [a, b, c, d] = self.e;
        let n = self.n;
        let ad = dot(a, d, 0, 0, n);
        let bc = dot(b, c, 0, 0, n);
        (ad + n - bc) % n
    }

    pub fn trace(&self) -> u64 {
        (self.e[0] + self.e[3]) % self.n
    }

    pub fn is_invertible(&self) -> bool {
        gcd(self.det(), self.n) == 1
    }

    pub fn inv(&self) -> Result<Self> {
        let di = inv_mod(self.det(), self.n).map_err(|_| Error::NonInvertible(self.n))?;
        let [a, b, c, d] = self.e;
        let n = self.n;
        Ok(Self::from_u64(
            [
                dot(d, di, 0, 0, n),
                dot(n - b, di, 0, 0, n),
                dot(n - c, di, 0, 0, n),
                dot(a, di, 0, 0, n),
            ],
            n,
        ))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.n);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.n;
        Self {
            e: std::array::from_fn(|i| ((self.e[i] as u128 + o.e[i] as u128) % n as u128) as u64),
            n,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.n;
        Self {
            e: std::array::from_fn(|i| ((self.e[i] as u128 + (n - o.e[i]) as u128) % n as u128) as u64),
            n,
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let n = self.n;
        Self {
            e: self.e.map(|x| dot(x, c % n, 0, 0, n)),
            n,
        }
    }

    pub fn act(&self, v: [u64; 2]) -> [u64; 2] {
        let [a, b, c, d] = self.e;
        let n = self.n;
        [dot(a, v[0] % n, b, v[1] % n, n), dot(c, v[0] % n, d, v[1] % n, n)]
    }

    pub fn reduce(&self, d: u64) -> Self {
        Self::from_u64(self.e, d)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_scalar(&self) -> bool {
        self.e[1] == 0 && self.e[2] == 0 && self.e[0] == self.e[3]
    }

    pub fn commutator(&self, o: &Self) -> Self {
        let ai = self.inv().expect("invertible");
        let bi = o.inv().expect("invertible");
        self.mul(o).mul(&ai).mul(&bi)
    }

    /// Multiplicative order; the matrix must be invertible.
    pub fn order(&self) -> u64 {
        group::element_order(Self::identity(self.n), *self)
    }

    /// ℓ-adic valuation of the matrix: the minimum over its entries (`k` for zero).
    pub fn valuation(&self, ring: &Ring) -> u32 {
        self.e.iter().map(|&x| ring.val(x)).min().unwrap_or(ring.k)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.e.to_vec()
    }
}

impl GroupElement for Mat2 {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inverse(&self) -> Self {
        self.inv().expect("group elements are invertible")
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "({a} {b}; {c} {d}) mod {}", self.n)
    }
}

/// A finite subgroup of GL₂(Z/NZ), fully enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatGroup {
    modulus: Modulus,
    generators: Vec<Mat2>,
    elements: Vec<Mat2>,
}

impl MatGroup {
    /// Breadth-first closure of `generators` modulo `n`.
    pub fn generate(n: u64, generators: Vec<Mat2>, cap: usize) -> Result<Self> {
        let modulus = Modulus::new(n)?;
        for g in &generators {
            if g.n != n {
                return Err(Error::ModulusMismatch(n, g.n));
            }
            if !g.is_invertible() {
                return Err(Error::NonInvertible(n));
            }
        }
        let elements = group::closure(Mat2::identity(n), &generators, cap)?;
        Ok(Self {
            modulus,
            generators,
            elements,
        })
    }

    /// The group generated by `candidates`, with a greedy generating set
    /// drawn from them in order.
    pub fn generate_greedy(n: u64, candidates: impl IntoIterator<Item = Mat2>, cap: usize) -> Result<Self> {
        let modulus = Modulus::new(n)?;
        let (generators, elements) = group::greedy_generate(Mat2::identity(n), candidates, cap)?;
        Ok(Self {
            modulus,
            generators,
            elements,
        })
    }

    /// Wraps a set already known to be a group, choosing generators greedily.
    pub fn from_closed_set(n: u64, mut elements: Vec<Mat2>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let not_closed = || Error::Inconsistent("element set is not closed under multiplication".into());
        let g = Self::generate_greedy(n, elements.iter().copied(), elements.len().max(1)).map_err(|e| match e {
            Error::GroupTooLarge { .. } => not_closed(),
            other => other,
        })?;
        if g.elements != elements {
            return Err(Error::Inconsistent("element set is not closed under multiplication".into()));
        }
        Ok(g)
    }

    /// Trusted constructor for element sets already closed under the generators.
    pub(crate) fn from_parts(n: u64, generators: Vec<Mat2>, mut elements: Vec<Mat2>) -> Result<Self> {
        elements.sort_unstable();
        Ok(Self {
            modulus: Modulus::new(n)?,
            generators,
            elements,
        })
    }

    pub fn trivial(n: u64) -> Result<Self> {
        Self::generate(n, vec![], 1)
    }

    /// All of GL₂(Z/NZ) by enumeration.
    pub fn gl2(n: u64) -> Result<Self> {
        let order = gl2_order(n);
        if order > DEFAULT_CAP as u128 {
            return Err(Error::GroupTooLarge { cap: DEFAULT_CAP });
        }
        let elements = all_matrices(n).filter(|m| m.is_invertible()).collect::<Vec<_>>();
        Self::with_standard_generators(n, elements, false)
    }

    /// All of SL₂(Z/NZ) by enumeration.
    pub fn sl2(n: u64) -> Result<Self> {
        let order = gl2_order(n) / euler_phi(n) as u128;
        if order > DEFAULT_CAP as u128 {
            return Err(Error::GroupTooLarge { cap: DEFAULT_CAP });
        }
        let elements = all_matrices(n).filter(|m| m.det() == 1 % n).collect::<Vec<_>>();
        Self::with_standard_generators(n, elements, true)
    }

    fn with_standard_generators(n: u64, elements: Vec<Mat2>, special: bool) -> Result<Self> {
        let mut cands = vec![
            Mat2::from_u64([1, 1, 0, 1], n),
            Mat2::from_u64([1, 0, 1, 1], n),
        ];
        if !special {
            cands.extend((2..n).filter(|&u| gcd(u, n) == 1).map(|u| Mat2::diag(u, 1, n)));
        }
        cands.extend(elements.iter().copied());
        let g = Self::generate_greedy(n, cands, elements.len().max(1))?;
        debug_assert_eq!(g.elements.len(), elements.len());
        Ok(g)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn n(&self) -> u64 {
        self.modulus.value()
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        m.n == self.n() && self.elements.binary_search(m).is_ok()
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.elements.binary_search(m).ok()
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// `g H g^{-1} = H`.
    pub fn is_normalised_by(&self, g: &Mat2) -> bool {
        let gi = g.inv().expect("invertible");
        self.generators.iter().all(|h| self.contains(&g.mul(h).mul(&gi)))
    }

    pub fn is_normal_in(&self, ambient: &Self) -> bool {
        self.is_subgroup_of(ambient) && ambient.generators.iter().all(|g| self.is_normalised_by(g))
    }

    /// Scalar matrices in `H`.
    pub fn scalars_in(&self) -> MatGroup {
        let n = self.n();
        let scal: Vec<Mat2> = self.elements.iter().copied().filter(Mat2::is_scalar).collect();
        Self::from_closed_set(n, scal).expect("scalars of a group form a group")
    }

    /// Smallest `λ` with `λ Id ∈ H` and `λ ≢ 1 (mod ℓ)`.
    pub fn contains_nontrivial_homothety(&self, ell: u64) -> Option<u64> {
        self.elements
            .iter()
            .filter(|m| m.is_scalar() && m.e[0] % ell != 1 % ell)
            .map(|m| m.e[0])
            .min()
    }

    pub fn derived_subgroup(&self) -> Result<MatGroup> {
        let n = self.n();
        let comms: Vec<Mat2> = self
            .generators
            .iter()
            .flat_map(|a| self.generators.iter().map(move |b| a.commutator(b)))
            .filter(|c| !c.is_identity())
            .collect();
        let (generators, elements) =
            group::normal_closure(Mat2::identity(n), &comms, &self.generators, self.order().max(1))?;
        Ok(Self {
            modulus: self.modulus.clone(),
            generators,
            elements,
        })
    }

    /// Invariant factors `d_1 | d_2 | …` of `H / H'` (empty when perfect).
    pub fn abelianisation(&self) -> Result<Vec<u64>> {
        let derived = self.derived_subgroup()?;
        let index = (self.order() / derived.order()) as u64;
        let mut per_prime: Vec<Vec<u64>> = Vec::new();
        for (p, e) in crate::residue::arith::factorize(index) {
            // t_j = #A[p^j], counted via g^{p^j} ∈ H'
            let mut counts = vec![1u64];
            let mut j = 1;
            loop {
                let pj = p.pow(j);
                let c = self
                    .elements
                    .iter()
                    .filter(|g| derived.contains(&g.pow(pj)))
                    .count() as u64
                    / derived.order() as u64;
                counts.push(c);
                if c == p.pow(e) {
                    break;
                }
                j += 1;
            }
            // number of cyclic factors of exponent ≥ j is log_p(t_j / t_{j-1})
            let at_least: Vec<u32> = (1..counts.len())
                .map(|j| v_p(counts[j] / counts[j - 1], p).unwrap())
                .collect();
            let mut parts = Vec::new();
            for j in 1..=at_least.len() {
                let here = at_least[j - 1] - at_least.get(j).copied().unwrap_or(0);
                for _ in 0..here {
                    parts.push(p.pow(j as u32));
                }
            }
            parts.sort_unstable();
            per_prime.push(parts);
        }
        let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![1u64; len];
        for parts in &per_prime {
            let offset = len - parts.len();
            for (i, &x) in parts.iter().enumerate() {
                out[offset + i] *= x;
            }
        }
        Ok(out)
    }

    pub fn exponent(&self) -> u64 {
        self.elements.iter().fold(1, |acc, g| lcm(acc, g.order()))
    }

    /// `H(M) = ⟨g^M : g ∈ H⟩`.
    pub fn power_subgroup(&self, m: u64) -> Result<MatGroup> {
        let mut powers: Vec<Mat2> = self.elements.iter().map(|g| g.pow(m)).collect();
        powers.sort_unstable();
        powers.dedup();
        Self::generate_greedy(self.n(), powers, self.order().max(1))
    }

    pub fn reduce_level(&self, d: u64) -> Result<MatGroup> {
        let n = self.n();
        if d == 0 || n % d != 0 {
            return Err(Error::NotDivisor(d, n));
        }
        let mut elements: Vec<Mat2> = self.elements.iter().map(|m| m.reduce(d)).collect();
        elements.sort_unstable();
        elements.dedup();
        let mut generators: Vec<Mat2> = self
            .generators
            .iter()
            .map(|m| m.reduce(d))
            .filter(|m| !m.is_identity())
            .collect();
        generators.dedup();
        Ok(Self {
            modulus: Modulus::new(d)?,
            generators,
            elements,
        })
    }

    pub fn kernel_of_reduction(&self, d: u64) -> Result<MatGroup> {
        let n = self.n();
        if d == 0 || n % d != 0 {
            return Err(Error::NotDivisor(d, n));
        }
        let kernel: Vec<Mat2> = self
            .elements
            .iter()
            .copied()
            .filter(|m| m.reduce(d).is_identity())
            .collect();
        Self::from_closed_set(n, kernel)
    }

    /// Additive span of the elements in `(Z/ℓ^k)^4`, i.e. the algebra `Z_ℓ[H]` at level ℓ^k.
    pub fn matrix_algebra(&self) -> Result<Submodule> {
        let ring = prime_power_ring(&self.modulus)?;
        let rows: Vec<Vec<u64>> = self.elements.iter().map(Mat2::to_vec).collect();
        Ok(Submodule::new(ring, 4, &rows))
    }

    /// Algebra generated by `Id` and the generators, by closing the span under
    /// right multiplication by generators.
    pub fn algebra_generated(&self) -> Result<Submodule> {
        let ring = prime_power_ring(&self.modulus)?;
        let n = self.n();
        let mut span = Submodule::new(ring, 4, &[Mat2::identity(n).to_vec()]);
        loop {
            let mut rows: Vec<Vec<u64>> = span.basis().to_vec();
            for b in span.basis() {
                let bm = Mat2::from_u64([b[0], b[1], b[2], b[3]], n);
                for g in &self.generators {
                    rows.push(bm.mul(g).to_vec());
                }
            }
            let next = Submodule::new(ring, 4, &rows);
            if next == span {
                return Ok(span);
            }
            span = next;
        }
    }

    /// Every subgroup, built as joins of cyclic subgroups (small groups only).
    pub fn all_subgroups(&self) -> Result<Vec<MatGroup>> {
        let n = self.n();
        let id = Mat2::identity(n);
        let mut cyclic: Vec<(Mat2, Vec<Mat2>)> = Vec::new();
        let mut seen_cyclic = std::collections::HashSet::new();
        for g in &self.elements {
            let c = group::closure(id, &[*g], self.order())?;
            if seen_cyclic.insert(c.clone()) {
                cyclic.push((*g, c));
            }
        }
        let mut found: std::collections::HashMap<Vec<Mat2>, Vec<Mat2>> = std::collections::HashMap::new();
        found.insert(vec![id], vec![]);
        let mut frontier: Vec<(Vec<Mat2>, Vec<Mat2>)> = vec![(vec![id], vec![])];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (elems, gens) in &frontier {
                for (g, c) in &cyclic {
                    if c.iter().all(|x| elems.binary_search(x).is_ok()) {
                        continue;
                    }
                    let mut gs = gens.clone();
                    gs.push(*g);
                    let joined = group::extend_closure(elems.clone(), &gs, self.order())?;
                    if !found.contains_key(&joined) {
                        found.insert(joined.clone(), gs.clone());
                        next.push((joined, gs));
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<MatGroup> = found
            .into_iter()
            .map(|(elements, generators)| MatGroup {
                modulus: self.modulus.clone(),
                generators,
                elements,
            })
            .collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        Ok(out)
    }

    /// Lines of F_ℓ² (as vectors) stabilised by the mod-ℓ reduction.
    pub fn stable_lines_mod(&self, ell: u64) -> Vec<[u64; 2]> {
        let lines = std::iter::once([1, 0]).chain((0..ell).map(|t| [t, 1]));
        lines
            .filter(|&v| {
                self.generators.iter().all(|g| {
                    let w = g.reduce(ell).act(v);
                    // w ∥ v  ⇔  det(v w) = 0
                    (w[0] * v[1] + ell * ell - (w[1] * v[0]) % ell) % ell == 0
                })
            })
            .collect()
    }

    pub fn to_descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            modulus: self.n(),
            generators: self.generators.iter().map(|g| g.e).collect(),
        }
    }
}

pub(crate) fn prime_power_ring(m: &Modulus) -> Result<Ring> {
    match m.factors() {
        [(p, k)] => Ring::new(*p, *k),
        _ => Err(Error::InvalidArgument(format!(
            "modulus {} is not a prime power",
            m.value()
        ))),
    }
}

/// JSON group descriptor: `{"modulus": N, "generators": [[a,b,c,d], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub modulus: u64,
    pub generators: Vec<[u64; 4]>,
}

impl GroupDescriptor {
    pub fn build(&self, cap: usize) -> Result<MatGroup> {
        let n = self.modulus;
        Modulus::new(n)?;
        let gens = self.generators.iter().map(|e| Mat2::from_u64(*e, n)).collect();
        MatGroup::generate(n, gens, cap)
    }
}

pub fn all_matrices(n: u64) -> impl Iterator<Item = Mat2> {
    (0..n).flat_map(move |a| {
        (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| Mat2::from_u64([a, b, c, d], n))))
    })
}

pub fn euler_phi(n: u64) -> u64 {
    crate::residue::arith::factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// `#GL₂(Z/NZ) = N^4 ∏_{p | N} (1 − 1/p)(1 − 1/p²)`.
pub fn gl2_order(n: u64) -> u128 {
    let mut acc = (n as u128).pow(4);
    for (p, _) in crate::residue::arith::factorize(n) {
        let p = p as u128;
        acc = acc / (p * p * p) * ((p - 1) * (p * p - 1));
    }
    acc
}

/// Parameters `(γ, δ)` of a Cartan subgroup at level `ℓ^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanData {
    pub gamma: u8,
    pub delta: i64,
    pub ell: u64,
    pub k: u32,
}

impl CartanData {
    pub fn new(ell: u64, k: u32, gamma: u8, delta: i64) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::InvalidArgument(format!("{ell} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("level must be at least 1".into()));
        }
        if gamma > 1 {
            return Err(Error::InvalidArgument("gamma must be 0 or 1".into()));
        }
        if gamma == 1 && ell != 2 {
            return Err(Error::InvalidArgument("gamma = 1 is only allowed for ell = 2".into()));
        }
        Ok(Self { gamma, delta, ell, k })
    }

    pub fn modulus(&self) -> u64 {
        self.ell.pow(self.k)
    }

    /// `(x, δy; y, x+γy)`.
    pub fn matrix(&self, x: u64, y: u64) -> Mat2 {
        let n = self.modulus();
        let g = self.gamma as i128;
        Mat2::new(
            [x as i128, self.delta as i128 * y as i128, y as i128, x as i128 + g * y as i128],
            n,
        )
    }

    /// `(1 γ; 0 −1)`.
    pub fn reflection(&self) -> Mat2 {
        Mat2::new([1, self.gamma as i128, 0, -1], self.modulus())
    }

    pub fn is_split_mod_ell(&self) -> bool {
        // x² + γx − δ has a root mod ℓ
        let l = self.ell;
        (0..l).any(|x| reduce_i128(x as i128 * x as i128 + self.gamma as i128 * x as i128 - self.delta as i128, l) == 0)
    }

    /// `v_ℓ(4δ)`, with `v_ℓ(0)` reported as the level `k`.
    pub fn v_four_delta(&self) -> u32 {
        let x = (4 * self.delta).unsigned_abs();
        v_p(x, self.ell).unwrap_or(self.k)
    }
}

/// The Cartan subgroup: all `(x, δy; y, x+γy)` with unit determinant.
pub fn cartan(data: &CartanData) -> Result<MatGroup> {
    let n = data.modulus();
    if (n as u128) * (n as u128) > DEFAULT_CAP as u128 * 4 {
        return Err(Error::GroupTooLarge { cap: DEFAULT_CAP });
    }
    let mut elems: Vec<Mat2> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| data.matrix(x, y))
        .filter(Mat2::is_invertible)
        .collect();
    elems.sort_unstable();
    MatGroup::from_closed_set(n, elems)
}

/// `N = C ∪ (1 γ; 0 −1)·C`.
pub fn cartan_normaliser(c: &MatGroup, data: &CartanData) -> Result<MatGroup> {
    let w = data.reflection();
    let mut elems: Vec<Mat2> = c.elements().to_vec();
    elems.extend(c.elements().iter().map(|m| w.mul(m)));
    MatGroup::from_closed_set(c.n(), elems)
}

pub fn is_quadratic_residue(a: u64, p: u64) -> bool {
    let a = a % p;
    a == 0 || pow_mod(a, (p - 1) / 2, p) == 1
}

pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| !is_quadratic_residue(a, p)).expect("odd prime has non-residues")
}

fn check_odd_prime_nonresidue(p: u64, eps: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    if is_quadratic_residue(eps, p) {
        return Err(Error::InvalidArgument(format!("{eps} is a square mod {p}")));
    }
    Ok(())
}

/// `C_ns(p) = {(a bε; b a)}`.
pub fn nonsplit_cartan_modp(p: u64, eps: u64) -> Result<MatGroup> {
    check_odd_prime_nonresidue(p, eps)?;
    let data = CartanData::new(p, 1, 0, eps as i64)?;
    cartan(&data)
}

/// `N_ns(p) = C_ns(p) ∪ (1 0; 0 −1)·C_ns(p)`.
pub fn nonsplit_normaliser_modp(p: u64, eps: u64) -> Result<MatGroup> {
    check_odd_prime_nonresidue(p, eps)?;
    let data = CartanData::new(p, 1, 0, eps as i64)?;
    cartan_normaliser(&cartan(&data)?, &data)
}

/// `D(p)`: cubes of `C_ns(p)` together with `(1 0; 0 −1)` times the cubes.
pub fn d_subgroup(p: u64, eps: u64) -> Result<MatGroup> {
    check_odd_prime_nonresidue(p, eps)?;
    if p % 3 != 2 {
        return Err(Error::InvalidArgument(format!("{p} is not 2 mod 3")));
    }
    let c = nonsplit_cartan_modp(p, eps)?;
    let w = Mat2::diag(1, p - 1, p);
    let mut cubes: Vec<Mat2> = c.elements().iter().map(|m| m.pow(3)).collect();
    cubes.sort_unstable();
    cubes.dedup();
    let mut elems = cubes.clone();
    elems.extend(cubes.iter().map(|m| w.mul(m)));
    MatGroup::from_closed_set(p, elems)
}

/// Normaliser of `H` inside GL₂(F_p), by brute force.
pub fn normaliser_in_gl2(h: &MatGroup) -> Result<MatGroup> {
    let p = h.n();
    let elems: Vec<Mat2> = all_matrices(p)
        .filter(|g| g.is_invertible() && h.is_normalised_by(g))
        .collect();
    MatGroup::from_closed_set(p, elems)
}

/// The kernel `Id + ℓ^j Mat₂` of reduction to level ℓ^j inside GL₂(Z/ℓ^k),
/// enumerated directly (`ℓ^{4(k−j)}` elements for `j ≥ 1`).
pub fn congruence_kernel(ell: u64, k: u32, j: u32) -> Result<MatGroup> {
    if j == 0 {
        return MatGroup::gl2(ell.pow(k));
    }
    let n = ell.pow(k);
    let j = j.min(k);
    let s = ell.pow(j);
    let r = n / s;
    let size = (r as u128).pow(4);
    if size > DEFAULT_CAP as u128 {
        return Err(Error::GroupTooLarge { cap: DEFAULT_CAP });
    }
    let elems: Vec<Mat2> = all_matrices(r)
        .map(|a| Mat2::from_u64([1 + s * a.e[0], s * a.e[1], s * a.e[2], 1 + s * a.e[3]], n))
        .collect();
    MatGroup::from_closed_set(n, elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: [i128; 4], n: u64) -> Mat2 {
        Mat2::new(e, n)
    }

    #[test]
    fn subgroup_lattices() {
        assert_eq!(MatGroup::gl2(2).unwrap().all_subgroups().unwrap().len(), 6);
        let subs = MatGroup::gl2(3).unwrap().all_subgroups().unwrap();
        assert_eq!(subs.len(), 55);
        assert!(subs.iter().all(|h| 48 % h.order() == 0));
    }

    #[test]
    fn arithmetic_examples() {
        let a = m([2, 3, 1, 4], 7);
        assert_eq!(Mat2::identity(7).mul(&a), a);
        assert_eq!(Mat2::diag(2, 3, 5).det(), 1);
        assert_eq!(m([1, 1, 0, 1], 9).inv().unwrap(), m([1, 8, 0, 1], 9));
        assert!(m([3, 0, 0, 1], 9).inv().is_err());
        assert_eq!(a.mul(&a.inv().unwrap()), Mat2::identity(7));
    }

    #[test]
    fn large_modulus_arithmetic() {
        let n = (1u64 << 61) - 1;
        let a = Mat2::from_u64([n - 1, 3, n - 2, 5], n);
        let b = a.inv().unwrap();
        assert!(a.mul(&b).is_identity());
    }

    #[test]
    fn det_is_multiplicative() {
        let n = 12;
        for a in all_matrices(n).step_by(97) {
            for b in all_matrices(n).step_by(389) {
                assert_eq!(a.mul(&b).det(), (a.det() * b.det()) % n);
            }
        }
    }

    #[test]
    fn closure_examples() {
        assert_eq!(MatGroup::generate(5, vec![Mat2::identity(5)], 10).unwrap().order(), 1);
        assert_eq!(MatGroup::generate(5, vec![m([1, 1, 0, 1], 5)], 10).unwrap().order(), 5);
        let sl = MatGroup::generate(5, vec![m([1, 1, 0, 1], 5), m([1, 0, 1, 1], 5)], 1000).unwrap();
        assert_eq!(sl.order(), 120);
        // independent count of det-1 matrices
        assert_eq!(all_matrices(5).filter(|x| x.det() == 1).count(), 120);
        assert!(matches!(
            MatGroup::generate(5, vec![m([1, 1, 0, 1], 5), m([1, 0, 1, 1], 5)], 50),
            Err(Error::GroupTooLarge { cap: 50 })
        ));
        assert!(matches!(
            MatGroup::generate(5, vec![m([1, 0, 0, 0], 5)], 50),
            Err(Error::NonInvertible(5))
        ));
    }

    #[test]
    fn closure_is_idempotent_and_sorted() {
        let g = MatGroup::generate(7, vec![m([1, 1, 0, 1], 7), m([3, 0, 0, 1], 7)], 1000).unwrap();
        let again = MatGroup::generate(7, g.elements().to_vec(), 1000).unwrap();
        assert_eq!(again.elements(), g.elements());
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn gl2_order_formula_matches_enumeration() {
        for n in 1..=8u64 {
            let count = all_matrices(n).filter(Mat2::is_invertible).count() as u128;
            assert_eq!(gl2_order(n), count, "n={n}");
        }
        assert_eq!(MatGroup::gl2(6).unwrap().order() as u128, gl2_order(6));
        assert_eq!(MatGroup::sl2(9).unwrap().order(), 648);
    }

    #[test]
    fn cartan_examples() {
        let split = CartanData::new(5, 1, 0, 1).unwrap();
        let ns = CartanData::new(5, 1, 0, 2).unwrap();
        let c = cartan(&split).unwrap();
        assert_eq!(c.order(), 16);
        let count = (0..5u64)
            .flat_map(|x| (0..5u64).map(move |y| (x, y)))
            .filter(|&(x, y)| (x * x + 25 - (y * y) % 5) % 5 != 0)
            .count();
        assert_eq!(count, 16);
        assert_eq!(cartan(&ns).unwrap().order(), 24);
        assert_eq!(cartan(&CartanData::new(5, 2, 0, 1).unwrap()).unwrap().order(), 400);
        assert_eq!(cartan_normaliser(&c, &split).unwrap().order(), 32);
        let cn = cartan(&ns).unwrap();
        let nn = cartan_normaliser(&cn, &ns).unwrap();
        assert_eq!(nn.order(), 48);
        assert!(cn.is_subgroup_of(&nn));
        assert!(c.is_abelian() && cn.is_abelian());
    }

    #[test]
    fn normaliser_matches_brute_force() {
        for delta in [1, 2] {
            let data = CartanData::new(5, 1, 0, delta).unwrap();
            let c = cartan(&data).unwrap();
            assert_eq!(normaliser_in_gl2(&c).unwrap(), cartan_normaliser(&c, &data).unwrap());
        }
    }

    #[test]
    fn cartan_parameters_validated() {
        assert!(CartanData::new(3, 1, 1, 1).is_err());
        assert!(CartanData::new(2, 3, 1, 1).is_ok());
        assert!(CartanData::new(4, 1, 0, 1).is_err());
    }

    #[test]
    fn nonsplit_and_d_subgroup() {
        let c = nonsplit_cartan_modp(5, 2).unwrap();
        assert_eq!(c.order(), 24);
        assert_eq!(d_subgroup(5, 2).unwrap().order(), 16);
        assert_eq!(nonsplit_normaliser_modp(5, 2).unwrap().order(), 48);
        assert!((1..5).all(|l| c.contains(&Mat2::scalar(l, 5))));
        assert!(nonsplit_cartan_modp(5, 4).is_err());
        assert!(d_subgroup(7, 3).is_err());
        assert_eq!(smallest_nonresidue(5), 2);
        assert_eq!(smallest_nonresidue(7), 3);
        let d = d_subgroup(11, smallest_nonresidue(11)).unwrap();
        assert_eq!(d.order(), 240 / 3);
    }

    #[test]
    fn homothety_examples() {
        let gl3 = MatGroup::gl2(3).unwrap();
        assert_eq!(gl3.scalars_in().order(), 2);
        let sl3 = MatGroup::sl2(3).unwrap();
        assert_eq!(sl3.scalars_in().order(), 2);
        assert_eq!(sl3.contains_nontrivial_homothety(3), Some(2));
        assert_eq!(MatGroup::trivial(3).unwrap().contains_nontrivial_homothety(3), None);
    }

    #[test]
    fn derived_and_abelianisation() {
        let c = cartan(&CartanData::new(5, 1, 0, 1).unwrap()).unwrap();
        assert_eq!(c.derived_subgroup().unwrap().order(), 1);
        assert_eq!(c.abelianisation().unwrap(), vec![4, 4]);
        let gl5 = MatGroup::gl2(5).unwrap();
        let d = gl5.derived_subgroup().unwrap();
        assert_eq!(d.order(), 120);
        assert!(d.elements().iter().all(|g| g.det() == 1));
        assert_eq!(gl5.abelianisation().unwrap(), vec![4]);
        let gl2 = MatGroup::gl2(2).unwrap();
        assert_eq!(gl2.abelianisation().unwrap(), vec![2]);
        assert_eq!(cartan(&CartanData::new(5, 1, 0, 2).unwrap()).unwrap().abelianisation().unwrap(), vec![24]);
    }

    #[test]
    fn exponent_of_pgl2_f2() {
        // GL₂(F₂) = PGL₂(F₂) ≅ S₃
        let g = MatGroup::gl2(2).unwrap();
        let mut orders: Vec<u64> = g.elements().iter().map(Mat2::order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
        assert_eq!(g.exponent(), 6);
    }

    #[test]
    fn power_subgroups() {
        let gl3 = MatGroup::gl2(3).unwrap();
        assert_eq!(gl3.power_subgroup(1).unwrap().elements(), gl3.elements());
        let pm = MatGroup::generate(4, vec![Mat2::scalar(3, 4)], 10).unwrap();
        assert_eq!(pm.power_subgroup(2).unwrap().order(), 1);
        let sl7 = MatGroup::sl2(7).unwrap();
        let j2 = sl7.power_subgroup(2).unwrap();
        assert_eq!(j2.order(), sl7.order());
        let p = gl3.power_subgroup(2).unwrap();
        assert!(p.is_normal_in(&gl3));
    }

    #[test]
    fn algebra_examples() {
        let triv = MatGroup::trivial(3).unwrap();
        assert_eq!(triv.matrix_algebra().unwrap().basis(), &[vec![1, 0, 0, 1]]);
        let gl3 = MatGroup::gl2(3).unwrap();
        assert_eq!(gl3.matrix_algebra().unwrap().order_exponent(), 4);
        let diag3 = MatGroup::from_closed_set(3, vec![Mat2::diag(1, 1, 3), Mat2::diag(1, 2, 3), Mat2::diag(2, 1, 3), Mat2::diag(2, 2, 3)]).unwrap();
        let alg = diag3.matrix_algebra().unwrap();
        assert_eq!(alg.basis(), &[vec![1, 0, 0, 0], vec![0, 0, 0, 1]]);
        assert_eq!(alg, diag3.algebra_generated().unwrap());
        // the (γ, δ) = (0, 1) model of the split Cartan spans {(a b; b a)}
        let split3 = cartan(&CartanData::new(3, 1, 0, 1).unwrap()).unwrap();
        assert_eq!(split3.matrix_algebra().unwrap().basis(), &[vec![1, 0, 0, 1], vec![0, 1, 1, 0]]);
        let k9 = congruence_kernel(3, 2, 1).unwrap();
        assert_eq!(k9.matrix_algebra().unwrap(), k9.algebra_generated().unwrap());
    }

    #[test]
    fn reduction_and_kernel() {
        let gl9 = MatGroup::gl2(9).unwrap();
        let r = gl9.reduce_level(3).unwrap();
        assert_eq!(r.elements(), MatGroup::gl2(3).unwrap().elements());
        let k = gl9.kernel_of_reduction(3).unwrap();
        assert_eq!(k.order(), 81);
        assert_eq!(k, congruence_kernel(3, 2, 1).unwrap());
        assert_eq!(gl9.reduce_level(9).unwrap().elements(), gl9.elements());
        assert!(gl9.reduce_level(2).is_err());
    }

    #[test]
    fn stable_lines() {
        let borel = MatGroup::generate(5, vec![m([2, 1, 0, 3], 5)], 100).unwrap();
        assert!(borel.stable_lines_mod(5).contains(&[1, 0]));
        assert!(MatGroup::gl2(3).unwrap().stable_lines_mod(3).is_empty());
    }

    #[test]
    fn descriptor_round_trip() {
        let g = MatGroup::generate(5, vec![m([1, 1, 0, 1], 5)], 10).unwrap();
        let json = serde_json::to_string(&g.to_descriptor()).unwrap();
        assert_eq!(json, r#"{"modulus":5,"generators":[[1,1,0,1]]}"#);
        let back: GroupDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build(10).unwrap(), g);
    }
}
