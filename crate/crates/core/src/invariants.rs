//! Elementary residue-symbol criteria for the rank and principality of the
//! Eisenstein-local Hecke algebra, and the hypothesis gate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_pth_power, is_regular_prime, p_adic_valuation, pow_mod, pow_mod_u64, primitive_pth_root, ResidueClass};
use crate::error::{Error, Result};

/// `(p, ℓ, k)` together with `ν = v_p(ℓ - 1)` and `v_p(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub p: u64,
    pub ell: u64,
    pub k: u32,
    pub nu: u32,
    pub vpk: u32,
}

impl ParameterPoint {
    /// Requires `p` and `ℓ` prime and `k ≥ 2`; the remaining conditions are
    /// reported by [`check_setup`].
    pub fn new(p: u64, ell: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || !is_prime(ell) {
            return Err(Error::Parameter(format!("p = {p} and l = {ell} must be prime")));
        }
        if k < 2 {
            return Err(Error::Parameter(format!("weight {k} < 2")));
        }
        Ok(Self {
            p,
            ell,
            k,
            nu: p_adic_valuation(ell as i64 - 1, p)?,
            vpk: p_adic_valuation(k as i64, p)?,
        })
    }

    /// The predicted `log_p |𝕋⁰_𝔪 / I|`.
    pub fn predicted_index(&self) -> u32 {
        self.nu + self.vpk
    }

    fn require_congruence(&self) -> Result<()> {
        if (self.ell - 1) % self.p != 0 {
            return Err(Error::Parameter(format!("{} does not divide {} - 1", self.p, self.ell)));
        }
        Ok(())
    }

    fn residue(&self, x: u64) -> ResidueClass {
        ResidueClass::new(x as i128, self.ell)
    }
}

/// Which of the standing assumptions hold at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub p_gt_3: bool,
    pub p_divides_ell_minus_1: bool,
    pub k_even: bool,
    pub p_minus_1_ndiv_k: bool,
    pub p_regular: bool,
    pub all_ok: bool,
}

impl HypothesisReport {
    /// Names of the failing conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.p_gt_3, "p<=3"),
            (self.p_divides_ell_minus_1, "p_ndiv_ell_minus_1"),
            (self.k_even, "k_odd"),
            (self.p_minus_1_ndiv_k, "p_minus_1_div_k"),
            (self.p_regular, "p_irregular"),
        ]
        .into_iter()
        .filter_map(|(ok, name)| (!ok).then_some(name))
        .collect()
    }
}

pub fn check_setup(pt: &ParameterPoint) -> HypothesisReport {
    let p_gt_3 = pt.p > 3;
    let p_divides_ell_minus_1 = (pt.ell - 1) % pt.p == 0;
    let k_even = pt.k % 2 == 0;
    let p_minus_1_ndiv_k = pt.k as u64 % (pt.p - 1) != 0;
    let p_regular = pt.p > 2 && is_regular_prime(pt.p).unwrap_or(false);
    HypothesisReport {
        p_gt_3,
        p_divides_ell_minus_1,
        k_even,
        p_minus_1_ndiv_k,
        p_regular,
        all_ok: p_gt_3 && p_divides_ell_minus_1 && k_even && p_minus_1_ndiv_k && p_regular,
    }
}

/// A residue class mod ℓ with its p-th-power status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantValue {
    pub value: ResidueClass,
    pub is_pth_power: bool,
}

fn finish(pt: &ParameterPoint, value: ResidueClass) -> Result<InvariantValue> {
    Ok(InvariantValue { value, is_pth_power: is_pth_power(value, pt.p)? })
}

/// `∏_{i=1}^{(ℓ-1)/2} i^i mod ℓ`.
pub fn merel_invariant(pt: &ParameterPoint) -> Result<InvariantValue> {
    pt.require_congruence()?;
    let l = pt.ell;
    let mut acc = pt.residue(1);
    for i in 1..=(l - 1) / 2 {
        acc = acc.mul(&pow_mod(pt.residue(i), i % (l - 1)));
    }
    finish(pt, acc)
}

/// `∏_{j=1}^{p-1} (1 - ζ^j)^{j^(k-2)} mod ℓ` for the given primitive p-th root ζ.
pub fn wake_unit_with_root(pt: &ParameterPoint, zeta: ResidueClass) -> Result<InvariantValue> {
    pt.require_congruence()?;
    let l = pt.ell;
    if zeta.modulus != l || zeta.value == 1 || pow_mod(zeta, pt.p).value != 1 {
        return Err(Error::Parameter(format!("{zeta} is not a primitive {}-th root of unity", pt.p)));
    }
    let mut acc = pt.residue(1);
    let mut zj = pt.residue(1);
    for j in 1..pt.p {
        zj = zj.mul(&zeta);
        let base = pt.residue(1 + l - zj.value);
        let e = pow_mod_u64(j, (pt.k - 2) as u64, l - 1);
        acc = acc.mul(&pow_mod(base, e));
    }
    finish(pt, acc)
}

/// [`wake_unit_with_root`] at the root `g^((ℓ-1)/p)` for the least primitive root `g`.
pub fn wake_unit(pt: &ParameterPoint) -> Result<InvariantValue> {
    pt.require_congruence()?;
    wake_unit_with_root(pt, primitive_pth_root(pt.p, pt.ell)?)
}

/// `∏_{i=1}^{ℓ-1} i^{Σ_{j<i} j^(k-1)} mod ℓ`, with the exponent sums kept mod ℓ - 1.
pub fn lecouturier_invariant(pt: &ParameterPoint) -> Result<InvariantValue> {
    pt.require_congruence()?;
    let l = pt.ell;
    let m = l - 1;
    let mut acc = pt.residue(1);
    let mut sum = 0u64;
    for i in 1..l {
        acc = acc.mul(&pow_mod(pt.residue(i), sum));
        sum = (sum + pow_mod_u64(i, (pt.k - 1) as u64, m)) % m;
    }
    finish(pt, acc)
}

/// Predicted rank and principality from the residue criteria.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    /// Fixed to `true` in weight 2, where it plays no role.
    pub c0_cup_b0_nonzero: bool,
    pub c0_cup_a0_nonzero: bool,
    pub rank_gt_1_predicted: bool,
    pub eis_principal_predicted: bool,
    /// The Merel product's flag, which in weight 2 must match the Lecouturier flag.
    pub merel_is_pth_power: bool,
    /// `"merel"`, `"wake"` and `"lecouturier"`.
    pub invariant_values: BTreeMap<String, InvariantValue>,
}

/// Truth table: weight 2 needs only the second flag; higher weight needs both.
pub fn prediction_flags(k: u32, b0_nonzero: bool, a0_nonzero: bool) -> (bool, bool) {
    if k == 2 {
        (!a0_nonzero, true)
    } else {
        (!(b0_nonzero && a0_nonzero), b0_nonzero)
    }
}

pub fn predict(pt: &ParameterPoint) -> Result<Prediction> {
    let h = check_setup(pt);
    if !h.all_ok {
        return Err(Error::HypothesesNotSatisfied(h.failures().join(", ")));
    }
    let merel = merel_invariant(pt)?;
    let wake = wake_unit(pt)?;
    let lec = lecouturier_invariant(pt)?;
    let c0_cup_b0_nonzero = pt.k == 2 || !wake.is_pth_power;
    let c0_cup_a0_nonzero = !lec.is_pth_power;
    let (rank_gt_1_predicted, eis_principal_predicted) = prediction_flags(pt.k, c0_cup_b0_nonzero, c0_cup_a0_nonzero);
    let invariant_values =
        [("merel", merel), ("wake", wake), ("lecouturier", lec)].into_iter().map(|(n, v)| (n.to_string(), v)).collect();
    Ok(Prediction {
        c0_cup_b0_nonzero,
        c0_cup_a0_nonzero,
        rank_gt_1_predicted,
        eis_principal_predicted,
        merel_is_pth_power: merel.is_pth_power,
        invariant_values,
    })
}
