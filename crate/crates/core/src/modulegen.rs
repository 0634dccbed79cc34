//! Submodules of `(Z/ℓ^k)^d` in Howell form, module generation under a matrix
//! algebra, commutator modules and the lattice-containment checks built on them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Ring};
use crate::matgroup::{prime_power_ring, CartanData, Mat2, MatGroup};
use crate::residue::Valuation;

/// A submodule of `(Z/ℓ^k)^dim`, stored as its Howell-form basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    ring: Ring,
    dim: usize,
    basis: Matrix,
}

impl Submodule {
    pub fn new(ring: Ring, dim: usize, gens: &[Vec<u64>]) -> Self {
        debug_assert!(gens.iter().all(|g| g.len() == dim));
        let basis = linalg::howell_form(&ring, &gens.to_vec(), dim);
        Self { ring, dim, basis }
    }

    pub fn zero(ring: Ring, dim: usize) -> Self {
        Self {
            ring,
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ring: Ring, dim: usize) -> Self {
        Self::new(ring, dim, &linalg::identity(dim))
    }

    /// `ℓ^e (Z/ℓ^k)^dim`.
    pub fn scaled_lattice(ring: Ring, dim: usize, e: u32) -> Self {
        let s = ring.pow_ell(e);
        let gens: Matrix = linalg::identity(dim)
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * s).collect())
            .collect();
        Self::new(ring, dim, &gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.dim && linalg::howell_contains(&self.ring, &self.basis, x)
    }

    /// `#V = ℓ^{order_exponent}`.
    pub fn order_exponent(&self) -> u32 {
        self.basis
            .iter()
            .map(|r| self.ring.k - linalg::pivot_of(&self.ring, r).expect("nonzero row").1)
            .sum()
    }

    pub fn order(&self) -> u128 {
        (self.ring.ell as u128).pow(self.order_exponent())
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Self::new(self.ring, self.dim, &rows))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || self.dim != other.dim {
            return Err(Error::ModulusMismatch(self.ring.q, other.ring.q));
        }
        Ok(())
    }

    /// Minimal valuation over nonzero members; `Full(k)` for the zero module.
    pub fn min_vector_valuation(&self) -> Valuation {
        self.basis
            .iter()
            .map(|r| r.iter().map(|&x| self.ring.val(x)).min().unwrap_or(self.ring.k))
            .min()
            .map_or(Valuation::Full(self.ring.k), Valuation::Exact)
    }

    /// Whether `ℓ^e (Z/ℓ^k)^dim ⊆ V`.
    pub fn contains_scaled_lattice(&self, e: u32) -> bool {
        let s = self.ring.pow_ell(e);
        (0..self.dim).all(|i| {
            let mut v = vec![0; self.dim];
            v[i] = s;
            self.contains(&v)
        })
    }

    /// Smallest `e` with `ℓ^e (Z/ℓ^k)^dim ⊆ V` (at most `k`).
    pub fn minimal_lattice_exponent(&self) -> u32 {
        (0..=self.ring.k)
            .find(|&e| self.contains_scaled_lattice(e))
            .unwrap_or(self.ring.k)
    }

    /// Reduction modulo `ℓ^j` for `j ≤ k`.
    pub fn reduce_to(&self, j: u32) -> Result<Self> {
        if j > self.ring.k {
            return Err(Error::NotDivisor(self.ring.ell.pow(j), self.ring.q));
        }
        let ring = Ring::new(self.ring.ell, j)?;
        Ok(Self::new(ring, self.dim, &self.basis))
    }

    /// Every member (small modules only).
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = vec![vec![0; self.dim]];
        for row in &self.basis {
            let (_, v) = linalg::pivot_of(&self.ring, row).expect("nonzero row");
            let ord = self.ring.ell.pow(self.ring.k - v);
            let mut next = Vec::with_capacity(out.len() * ord as usize);
            for x in &out {
                for c in 0..ord {
                    next.push(
                        x.iter()
                            .zip(row)
                            .map(|(&a, &b)| self.ring.add(a, self.ring.mul(c, b)))
                            .collect(),
                    );
                }
            }
            out = next;
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Invariant-factor exponents of `self / sub`.
    pub fn quotient_exponents(&self, sub: &Self) -> Result<Vec<u32>> {
        self.check(sub)?;
        linalg::quotient_exponents(&self.ring, &self.basis, &sub.basis, self.dim)
    }

    /// Whether `g·w ∈ V` for every basis vector `w` and every `g ∈ H`.
    pub fn is_stable_under(&self, h: &MatGroup) -> bool {
        self.dim == 2
            && h.generators().iter().all(|g| {
                self.basis.iter().all(|w| {
                    let gw = g.act([w[0], w[1]]);
                    self.contains(&gw)
                })
            })
    }
}

/// `A · v`: the span of `a v` over a basis of the algebra `A ⊆ Mat₂`.
pub fn module_generated(algebra: &Submodule, v: [u64; 2]) -> Result<Submodule> {
    if algebra.dim != 4 {
        return Err(Error::InvalidArgument("algebra must live in Mat₂".into()));
    }
    let ring = algebra.ring;
    let n = ring.q;
    let rows: Vec<Vec<u64>> = algebra
        .basis
        .iter()
        .map(|a| {
            let m = Mat2::from_u64([a[0], a[1], a[2], a[3]], n);
            m.act(v).to_vec()
        })
        .collect();
    Ok(Submodule::new(ring, 2, &rows))
}

/// `[V, H]`: the span of `g w − w` over `g ∈ H` and `w` in a basis of `V`.
pub fn commutator_module(v: &Submodule, h: &MatGroup) -> Result<Submodule> {
    if v.dim != 2 || v.ring.q != h.n() {
        return Err(Error::ModulusMismatch(v.ring.q, h.n()));
    }
    let ring = v.ring;
    let mut rows = Vec::new();
    for g in h.elements() {
        for w in &v.basis {
            let gw = g.act([w[0], w[1]]);
            rows.push(vec![ring.sub(gw[0], w[0]), ring.sub(gw[1], w[1])]);
        }
    }
    Ok(Submodule::new(ring, 2, &rows))
}

/// Whether the mod-ℓ reduction of `H` fixes no line of F_ℓ².
pub fn irreducible_mod_ell(h: &MatGroup) -> Result<bool> {
    let ring = prime_power_ring(h.modulus())?;
    Ok(h.stable_lines_mod(ring.ell).is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupTheoryCase {
    /// `H ⊇ Id + ℓ^n Mat₂`: claim `ℓ^{d+n}`.
    Congruence,
    /// `H` irreducible mod ℓ: claim `ℓ^d`.
    Irreducible,
    /// `H` inside a Cartan normaliser, not inside the Cartan: claim `ℓ^{3n+d+v_ℓ(4δ)}`.
    CartanNormaliser,
}

impl GroupTheoryCase {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::Congruence),
            2 => Ok(Self::Irreducible),
            3 => Ok(Self::CartanNormaliser),
            _ => Err(Error::InvalidArgument(format!("case must be 1, 2 or 3, got {i}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupTheoryParams {
    pub n: u32,
    pub d: u32,
    pub cartan: Option<CartanData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupTheoryReport {
    pub case: GroupTheoryCase,
    pub claimed_exponent: u32,
    pub actual_exponent: u32,
    pub level: u32,
    pub module_order_exponent: u32,
    pub holds: bool,
    /// The claimed exponent is at least the level, so the containment is empty.
    pub vacuous: bool,
}

fn in_cartan(m: &Mat2, c: &CartanData) -> bool {
    let n = m.n;
    let [a, b, cc, d] = m.e;
    let delta = crate::residue::arith::reduce_i128(c.delta as i128, n);
    b == crate::residue::arith::mul_mod(delta, cc, n)
        && d == (a + (c.gamma as u64) * cc) % n
        && m.is_invertible()
}

fn in_cartan_normaliser(m: &Mat2, c: &CartanData) -> bool {
    in_cartan(m, c) || in_cartan(&c.reflection().mul(m), c)
}

/// Checks the hypotheses of the chosen case at level `ℓ^k`, then computes
/// `V = Z_ℓ[H]·v` and compares its lattice exponent with the claim.
pub fn verify_grouptheory_prop(
    h: &MatGroup,
    v: [u64; 2],
    case: GroupTheoryCase,
    params: &GroupTheoryParams,
) -> Result<GroupTheoryReport> {
    let ring = prime_power_ring(h.modulus())?;
    let (ell, k) = (ring.ell, ring.k);
    let vv = ring.val(v[0]).min(ring.val(v[1]));
    if vv > params.d {
        return Err(Error::HypothesesNotSatisfied(format!(
            "v has valuation {vv} > d = {}",
            params.d
        )));
    }
    let claimed = match case {
        GroupTheoryCase::Congruence => {
            let n = params.n;
            if n == 0 || n > k {
                return Err(Error::HypothesesNotSatisfied(format!("need 1 ≤ n ≤ k, got n = {n}")));
            }
            let s = ell.pow(n);
            let kernel_count = h
                .elements()
                .iter()
                .filter(|m| m.reduce(s).is_identity())
                .count() as u128;
            if kernel_count != (ell as u128).pow(4 * (k - n)) {
                return Err(Error::HypothesesNotSatisfied(format!(
                    "H does not contain Id + {ell}^{n} Mat₂"
                )));
            }
            params.d + n
        }
        GroupTheoryCase::Irreducible => {
            if !irreducible_mod_ell(h)? {
                return Err(Error::HypothesesNotSatisfied("H is reducible mod ℓ".into()));
            }
            params.d
        }
        GroupTheoryCase::CartanNormaliser => {
            let c = params
                .cartan
                .ok_or_else(|| Error::InvalidArgument("case 3 needs Cartan parameters".into()))?;
            if c.ell != ell || c.k != k {
                return Err(Error::InvalidArgument("Cartan data does not match the group level".into()));
            }
            let n = params.n;
            if n == 0 || n > k {
                return Err(Error::HypothesesNotSatisfied(format!("need 1 ≤ n ≤ k, got n = {n}")));
            }
            if !h.generators().iter().all(|g| in_cartan_normaliser(g, &c)) {
                return Err(Error::HypothesesNotSatisfied("H is not inside the Cartan normaliser".into()));
            }
            if h.generators().iter().all(|g| in_cartan(g, &c)) {
                return Err(Error::HypothesesNotSatisfied("H is inside the Cartan subgroup".into()));
            }
            let s = ell.pow(n);
            let q = ring.q;
            for x in (1..q).step_by(s as usize) {
                for y in (0..q).step_by(s as usize) {
                    let m = c.matrix(x, y);
                    if m.is_invertible() && !h.contains(&m) {
                        return Err(Error::HypothesesNotSatisfied(format!(
                            "H misses the Cartan element {m} ≡ Id mod {ell}^{n}"
                        )));
                    }
                }
            }
            3 * n + params.d + c.v_four_delta()
        }
    };
    let algebra = h.matrix_algebra()?;
    let module = module_generated(&algebra, v)?;
    let actual = module.minimal_lattice_exponent();
    Ok(GroupTheoryReport {
        case,
        claimed_exponent: claimed,
        actual_exponent: actual,
        level: k,
        module_order_exponent: module.order_exponent(),
        holds: actual <= claimed,
        vacuous: claimed >= k,
    })
}
