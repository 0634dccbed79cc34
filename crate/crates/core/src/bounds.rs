//! Effective constants and growth-parameter detection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matgroup::{CartanData, Mat2, MatGroup};
use crate::residue::arith::{lcm, v_p};

/// A torsion tower `H_ℓ, H_{ℓ²}, …` and its certified growth parameter.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthParams {
    pub ell: u64,
    pub delta_growth: u32,
    pub orders: Vec<usize>,
    pub n_min: u32,
    pub certified_up_to: u32,
}

/// Smallest `n` with `#H_{ℓ^{j+1}} / #H_{ℓ^j} = ℓ^δ` for every `n ≤ j` below the top
/// of the tower (at least 2 when `ℓ = 2`).
pub fn detect_growth_parameter(tower: &[MatGroup], delta_growth: u32) -> Result<GrowthParams> {
    if tower.len() < 2 {
        return Err(Error::InvalidArgument("tower needs at least two levels".into()));
    }
    if delta_growth != 2 && delta_growth != 4 {
        return Err(Error::InvalidArgument(format!("growth exponent {delta_growth} is not 2 or 4")));
    }
    let ell = tower[0].n();
    if !crate::residue::arith::is_prime(ell) {
        return Err(Error::NotPrimePower(ell, 1));
    }
    for (j, h) in tower.iter().enumerate() {
        let level = ell.pow(j as u32 + 1);
        if h.n() != level {
            return Err(Error::InvalidArgument(format!("level {} found where {level} expected", h.n())));
        }
        if j > 0 {
            let below = h.reduce_level(level / ell)?;
            if below.elements() != tower[j - 1].elements() {
                return Err(Error::Inconsistent(format!("reduction from level {level} is not onto the previous group")));
            }
        }
    }
    let orders: Vec<usize> = tower.iter().map(MatGroup::order).collect();
    let step = ell.pow(delta_growth) as usize;
    let top = tower.len() as u32;
    // ratios[j-1] compares levels j and j+1
    let maximal: Vec<bool> = orders.windows(2).map(|w| w[1] == w[0] * step).collect();
    if !maximal.last().copied().unwrap_or(false) {
        return Err(Error::HypothesesNotSatisfied(format!(
            "growth has not stabilised at level {ell}^{top}"
        )));
    }
    let mut n = maximal.len() as u32;
    while n > 1 && maximal[n as usize - 2] {
        n -= 1;
    }
    if ell == 2 {
        n = n.max(2);
    }
    Ok(GrowthParams {
        ell,
        delta_growth,
        orders,
        n_min: n,
        certified_up_to: top,
    })
}

/// Tower of reductions of `h` (level `ℓ^k`) to every `ℓ^j`, `j = 1..=k`.
pub fn tower_of(h: &MatGroup, ell: u64) -> Result<Vec<MatGroup>> {
    let k = v_p(h.n(), ell).filter(|&k| k > 0 && ell.pow(k) == h.n()).ok_or(Error::NotPrimePower(h.n(), ell))?;
    (1..=k)
        .map(|j| if j == k { Ok(h.clone()) } else { h.reduce_level(ell.pow(j)) })
        .collect()
}

/// Tower whose kernels are `Id + ℓ^{n0}·T` with `T` all of `Mat₂` (`δ = 4`)
/// or the diagonal matrices (`δ = 2`), up to level `ℓ^top`.
pub fn synthetic_tower(ell: u64, n0: u32, top: u32, delta_growth: u32) -> Result<Vec<MatGroup>> {
    if top <= n0 {
        return Err(Error::InvalidArgument("top level must exceed the planted parameter".into()));
    }
    let q = crate::residue::arith::checked_pow(ell, top)?;
    let s = ell.pow(n0);
    let gens: Vec<Mat2> = match delta_growth {
        4 => vec![
            Mat2::from_u64([1 + s, 0, 0, 1], q),
            Mat2::from_u64([1, 0, 0, 1 + s], q),
            Mat2::from_u64([1, s, 0, 1], q),
            Mat2::from_u64([1, 0, s, 1], q),
        ],
        2 => vec![Mat2::from_u64([1 + s, 0, 0, 1], q), Mat2::from_u64([1, 0, 0, 1 + s], q)],
        _ => return Err(Error::InvalidArgument(format!("growth exponent {delta_growth} is not 2 or 4"))),
    };
    let top_group = if delta_growth == 4 {
        crate::matgroup::congruence_kernel(ell, top, n0)?
    } else {
        MatGroup::generate(q, gens, crate::matgroup::DEFAULT_CAP)?
    };
    tower_of(&top_group, ell)
}

/// `a_ℓ = 4n + 2d`, or `8n + 2v_ℓ(4δ) + 2d` in the CM case.
pub fn a_ell(n: u32, d: u32, ell: u64, cm: Option<&CartanData>) -> u32 {
    match cm {
        None => 4 * n + 2 * d,
        Some(c) => {
            debug_assert_eq!(c.ell, ell);
            8 * n + 2 * c.v_four_delta() + 2 * d
        }
    }
}

/// `b_ℓ = 2n + 3v_ℓ([K̃:K])`.
pub fn b_ell(n: u32, degree_tilde: u64, ell: u64) -> u32 {
    2 * n + 3 * v_p(degree_tilde, ell).unwrap_or(0)
}

/// `ñ_ℓ ≤ n_ℓ + v_ℓ([K̃:K])`.
pub fn tilde_n_bound(n: u32, degree_tilde: u64, ell: u64) -> u32 {
    n + v_p(degree_tilde, ell).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TotalConstant {
    /// `None` when the product exceeds `u128`.
    pub value: Option<u128>,
    pub factors: Vec<(u64, u32)>,
}

impl std::fmt::Display for TotalConstant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fact = if self.factors.is_empty() {
            "1".to_string()
        } else {
            self.factors.iter().map(|(p, e)| format!("{p}^{e}")).collect::<Vec<_>>().join(" * ")
        };
        match self.value {
            Some(v) => write!(f, "{v} = {fact}"),
            None => write!(f, "{fact}"),
        }
    }
}

/// `C = ∏ ℓ^{a_ℓ + b_ℓ}`.
pub fn c_total(entries: &[(u64, u32, u32)]) -> TotalConstant {
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for &(ell, a, b) in entries {
        match factors.iter_mut().find(|(p, _)| *p == ell) {
            Some(f) => f.1 += a + b,
            None => factors.push((ell, a + b)),
        }
    }
    factors.retain(|&(_, e)| e > 0);
    factors.sort_unstable();
    let value = factors
        .iter()
        .try_fold(1u128, |acc, &(p, e)| (p as u128).checked_pow(e).and_then(|x| acc.checked_mul(x)));
    TotalConstant { value, factors }
}

pub const PETSCHE_C1: f64 = 134861.0;
pub const PETSCHE_C2: f64 = 104613.0;
const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveArithInputs {
    pub height_alpha: f64,
    pub degree_k: u64,
    pub szpiro_sigma: f64,
    pub log_norm_disc: f64,
    pub degree_tilde: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PetscheBounds {
    pub h_max: u32,
    pub d_max: u32,
    pub height_lower_bound: f64,
}

/// Height lower bound `B` for non-torsion points.
pub fn petsche_height_lower_bound(inputs: &CurveArithInputs) -> Result<f64> {
    validate(inputs)?;
    let k = inputs.degree_k as f64;
    let s2 = inputs.szpiro_sigma * inputs.szpiro_sigma;
    let l = (PETSCHE_C2 * k * s2).ln();
    Ok(inputs.log_norm_disc / (1e15 * k.powi(3) * s2.powi(3) * l * l))
}

fn validate(inputs: &CurveArithInputs) -> Result<()> {
    if inputs.degree_k == 0 || inputs.degree_tilde == 0 {
        return Err(Error::Domain("degrees must be positive".into()));
    }
    if !(inputs.szpiro_sigma >= 1.0) || !inputs.szpiro_sigma.is_finite() {
        return Err(Error::Domain("Szpiro ratio must be at least 1".into()));
    }
    if !(inputs.log_norm_disc > 0.0) || !(inputs.height_alpha > 0.0) {
        return Err(Error::Domain("logarithm arguments must be positive".into()));
    }
    Ok(())
}

/// Bounds on the divisibility parameters `h` and `d`.
pub fn petsche_bounds(inputs: &CurveArithInputs, ell: u64) -> Result<PetscheBounds> {
    let b = petsche_height_lower_bound(inputs)?;
    let k = inputs.degree_k as f64;
    let s2 = inputs.szpiro_sigma * inputs.szpiro_sigma;
    let prod = PETSCHE_C1 * k * s2 * (PETSCHE_C2 * k * s2).ln();
    let floored = (prod * (1.0 + SLACK)).floor();
    if floored < 1.0 || floored >= u64::MAX as f64 {
        return Err(Error::Domain(format!("h bound argument {floored} out of range")));
    }
    let h_max = v_p(floored as u64, ell).unwrap_or(0);
    let ratio = inputs.height_alpha / b;
    let d = ratio.ln() / (2.0 * (ell as f64).ln());
    let d_max = if d <= 0.0 { 0 } else { (d + SLACK).floor() as u32 };
    Ok(PetscheBounds {
        h_max,
        d_max,
        height_lower_bound: b,
    })
}

pub const T0: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 37];

pub fn t0_set() -> Vec<u64> {
    T0.to_vec()
}

/// Exponent of `PGL₂(F_p)`, enumerating one representative per projective class.
pub fn pgl2_exponent(p: u64) -> u64 {
    let mut reps: Vec<Mat2> = Vec::with_capacity((p * p * p) as usize);
    for b in 0..p {
        for c in 0..p {
            for d in 0..p {
                let m = Mat2::from_u64([1, b, c, d], p);
                if m.is_invertible() {
                    reps.push(m);
                }
            }
        }
    }
    for c in 1..p {
        for d in 0..p {
            reps.push(Mat2::from_u64([0, 1, c, d], p));
        }
    }
    reps.iter().fold(1, |acc, g| {
        let mut x = *g;
        let mut n = 1u64;
        while !x.is_scalar() {
            x = x.mul(g);
            n += 1;
        }
        lcm(acc, n)
    })
}

/// `M = lcm{exp PGL₂(F_p) : p ∈ T₀}`.
pub fn universal_m() -> u64 {
    T0.iter().fold(1, |acc, &p| lcm(acc, pgl2_exponent(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{cartan, congruence_kernel};

    #[test]
    fn growth_examples() {
        let tower: Vec<MatGroup> = (1..=3).map(|j| MatGroup::gl2(3u64.pow(j)).unwrap()).collect();
        assert_eq!(detect_growth_parameter(&tower, 4).unwrap().n_min, 1);
        let c = cartan(&CartanData::new(5, 3, 0, 1).unwrap()).unwrap();
        let t = tower_of(&c, 5).unwrap();
        assert_eq!(detect_growth_parameter(&t, 2).unwrap().n_min, 1);
        let k = congruence_kernel(3, 3, 2).unwrap();
        let t = tower_of(&k, 3).unwrap();
        assert_eq!(detect_growth_parameter(&t, 4).unwrap().n_min, 2);
        assert!(detect_growth_parameter(&t[..2], 4).is_err());
        assert!(detect_growth_parameter(&t[..1], 4).is_err());
    }

    #[test]
    fn growth_two_floor_and_mismatch() {
        let t = synthetic_tower(2, 1, 3, 4).unwrap();
        assert_eq!(detect_growth_parameter(&t, 4).unwrap().n_min, 2);
        let bad = vec![MatGroup::gl2(3).unwrap(), MatGroup::trivial(9).unwrap()];
        assert!(detect_growth_parameter(&bad, 4).is_err());
    }

    #[test]
    fn exponent_formulas() {
        assert_eq!(a_ell(1, 0, 5, None), 4);
        let cm = CartanData::new(3, 1, 0, 2).unwrap();
        assert_eq!(a_ell(1, 0, 3, Some(&cm)), 8);
        assert_eq!(a_ell(2, 1, 7, None), 10);
        assert_eq!(b_ell(1, 1, 7), 2);
        assert_eq!(b_ell(1, 2, 2), 5);
        assert_eq!(b_ell(3, 6, 3), 9);
        assert_eq!(tilde_n_bound(1, 1, 5), 1);
        assert_eq!(tilde_n_bound(1, 12, 2), 3);
        assert_eq!(tilde_n_bound(2, 12, 3), 3);
    }

    #[test]
    fn c_total_examples() {
        assert_eq!(c_total(&[]).value, Some(1));
        assert_eq!(c_total(&[(2, 4, 2)]).value, Some(64));
        let c = c_total(&[(2, 4, 2), (3, 8, 2)]);
        assert_eq!(c.value, Some(64 * 59049));
        assert_eq!(c.factors, vec![(2, 6), (3, 10)]);
        let big = c_total(&[(3, 100, 0)]);
        assert_eq!(big.value, None);
        assert_eq!(big.to_string(), "3^100");
    }

    #[test]
    fn petsche_examples() {
        let mut inputs = CurveArithInputs {
            height_alpha: 1.0,
            degree_k: 1,
            szpiro_sigma: 1.0,
            log_norm_disc: 1.0,
            degree_tilde: 1,
        };
        let b = petsche_height_lower_bound(&inputs).unwrap();
        inputs.height_alpha = b;
        assert_eq!(petsche_bounds(&inputs, 3).unwrap().d_max, 0);
        inputs.height_alpha = 9.0 * b;
        assert_eq!(petsche_bounds(&inputs, 3).unwrap().d_max, 1);
        // ⌊134861·log 104613⌋ computed independently
        let floored = (134861.0f64 * 104613.0f64.ln()).floor() as u64;
        let r = petsche_bounds(&inputs, 2).unwrap();
        assert_eq!(r.h_max, v_p(floored, 2).unwrap());
        inputs.log_norm_disc = 0.0;
        assert!(petsche_bounds(&inputs, 2).is_err());
    }

    #[test]
    fn universal_constant() {
        assert_eq!(t0_set(), vec![2, 3, 5, 7, 11, 13, 17, 37]);
        assert_eq!(pgl2_exponent(2), 6);
        for &p in &T0[..6] {
            // element orders of PGL₂(F_p) are p and the divisors of p ± 1
            assert_eq!(pgl2_exponent(p), lcm(lcm(p, p - 1), p + 1));
        }
        let m = universal_m();
        assert_eq!(m, 8_613_324_720);
        for &p in &T0 {
            assert_eq!(m % pgl2_exponent(p), 0);
        }
    }
}
