//! The extended affine Hecke algebra in both presentations.
//!
//! The canonical internal form is the standard basis {T_w : w ∈ W ⋉ X} with
//! the quadratic relation (T_s + 1)(T_s − q_s) = 0 and length-additive
//! products; every product reduces to right multiplication by generator
//! letters plus the length-zero elements T_γ, γ ∈ Ω.  The second
//! presentation has basis {T_v·θ_x : v ∈ W, x ∈ X}, where the θ_x form a
//! copy of the group algebra of X and slide past finite generators by the
//! commutation rule
//!
//!   θ_x T_s − T_s θ_{s(x)}
//!     = ((q_s − 1) + θ_{−α}(q^{(λ+λ*)/2} − q^{(λ−λ*)/2}))·(θ_x − θ_{s(x)})/(1 − θ_{−2α}).
//!
//! The quotient on the right is always a Laurent polynomial: when the
//! pairing ⟨x, α∨⟩ is odd the prefactor must carry the factor (1 + θ_{−α}),
//! which happens exactly when λ*(α) = λ(α); odd pairings with λ* ≠ λ cannot
//! occur because λ* ≠ λ forces α∨ ∈ 2Y.  A failed division is reported, not
//! papered over.
//!
//! On top of the two bases sit the involutions: the algebra automorphism
//! T_w ↦ (−1)^{ℓ(w_fin)} q(w) T_{w^{-1}}^{-1}, written `star`, and the
//! anti-automorphism κ(T_w) = T_{w^{-1}}.

use std::collections::BTreeMap;


use crate::affine_weyl::{AffineWeyl, AffineWeylElement};
use crate::coefficients::LaurentPoly;
use crate::error::{Error, Result};
use crate::root_datum::{affine_parameters, AffineParams, ParamAssignment, RootDatum};

/// An element in the standard basis: a finite sum Σ c_w T_w with nonzero
/// Laurent-polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElem {
    pub terms: BTreeMap<AffineWeylElement, LaurentPoly>,
}

impl HeckeElem {
    pub fn zero() -> Self {
        HeckeElem { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: AffineWeylElement, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = HeckeElem::zero();
        for (w, d) in &self.terms {
            out.add_term(w.clone(), d.mul(c));
        }
        out
    }

    pub fn coeff(&self, w: &AffineWeylElement) -> Option<&LaurentPoly> {
        self.terms.get(w)
    }
}

/// An element in the {T_v·θ_x} basis, keyed by (finite element id, x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlElem {
    pub terms: BTreeMap<(usize, Vec<i64>), LaurentPoly>,
}

impl BlElem {
    pub fn zero() -> Self {
        BlElem { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (usize, Vec<i64>), c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = BlElem::zero();
        for (k, d) in &self.terms {
            out.add_term(k.clone(), d.mul(c));
        }
        out
    }
}

/// The algebra engine: the group, the parameter map, and all arithmetic.
/// Basis inverses and θ's are memoized behind locks, so a shared reference
/// can serve concurrent readers.
pub struct HeckeAlgebra {
    pub aw: AffineWeyl,
    pub params: AffineParams,
    inverse_cache: std::sync::Mutex<BTreeMap<AffineWeylElement, HeckeElem>>,
    theta_cache: std::sync::Mutex<BTreeMap<Vec<i64>, HeckeElem>>,
}

impl HeckeAlgebra {
    pub fn new(datum: &RootDatum, assignment: &ParamAssignment) -> Result<Self> {
        let params = affine_parameters(datum, assignment)?;
        Ok(HeckeAlgebra {
            aw: AffineWeyl::new(datum),
            params,
            inverse_cache: std::sync::Mutex::new(BTreeMap::new()),
            theta_cache: std::sync::Mutex::new(BTreeMap::new()),
        })
    }

    pub fn nvars(&self) -> usize {
        self.params.nvars
    }

    pub fn datum(&self) -> &RootDatum {
        self.aw.datum()
    }

    fn poly_one(&self) -> LaurentPoly {
        LaurentPoly::one(self.nvars())
    }

    pub fn unit(&self) -> HeckeElem {
        self.t_basis(&self.aw.identity())
    }

    pub fn t_basis(&self, w: &AffineWeylElement) -> HeckeElem {
        let mut out = HeckeElem::zero();
        out.add_term(w.clone(), self.poly_one());
        out
    }

    pub fn t_finite(&self, v: usize) -> HeckeElem {
        self.t_basis(&self.aw.from_finite(v))
    }

    /// q(w) as a monomial in the parameter variables.
    pub fn q_of(&self, w: &AffineWeylElement) -> LaurentPoly {
        self.aw.q_of(w, &self.params)
    }

    fn check_compatible(&self, h: &HeckeElem) -> Result<()> {
        for c in h.terms.values() {
            if c.nvars != self.nvars() {
                return Err(Error::ParameterMismatch);
            }
        }
        Ok(())
    }

    /// h · T_s for a single S_aff generator.
    pub fn mul_gen(&self, h: &HeckeElem, s: usize) -> HeckeElem {
        let q_s = self.params.q_of_gen(s);
        let q_s_minus_1 = q_s.sub(&self.poly_one());
        let gen = self.aw.gen(s);
        let mut out = HeckeElem::zero();
        for (w, c) in &h.terms {
            let ws = self.aw.mul(w, &gen);
            if self.aw.aw_length(&ws) > self.aw.aw_length(w) {
                out.add_term(ws, c.clone());
            } else {
                out.add_term(ws, c.mul(&q_s));
                out.add_term(w.clone(), c.mul(&q_s_minus_1));
            }
        }
        out
    }

    /// h · T_s^{-1} via T_s^{-1} = q_s^{-1} T_s − (1 − q_s^{-1}).
    pub fn mul_gen_inverse(&self, h: &HeckeElem, s: usize) -> HeckeElem {
        let q_inv = self.params.q_of_gen(s).invert_monomial().expect("q_s invertible");
        let one_minus = self.poly_one().sub(&q_inv);
        self.mul_gen(h, s).scale(&q_inv).sub(&h.scale(&one_minus))
    }

    /// h · T_γ for γ ∈ Ω (length-additive, so a pure index shift).
    pub fn mul_omega(&self, h: &HeckeElem, gamma: &AffineWeylElement) -> HeckeElem {
        debug_assert_eq!(self.aw.aw_length(gamma), 0);
        let mut out = HeckeElem::zero();
        for (w, c) in &h.terms {
            out.add_term(self.aw.mul(w, gamma), c.clone());
        }
        out
    }

    /// Full product: fold the right factor term by term through its
    /// decomposition T_w = T_γ T_{s_{i_1}} ⋯ T_{s_{i_k}}.
    pub fn mul(&self, a: &HeckeElem, b: &HeckeElem) -> Result<HeckeElem> {
        self.check_compatible(a)?;
        self.check_compatible(b)?;
        let mut out = HeckeElem::zero();
        for (w, c) in &b.terms {
            let (gamma, word) = self.aw.omega_decompose(w);
            let mut acc = self.mul_omega(a, &gamma);
            for &s in &word {
                acc = self.mul_gen(&acc, s);
            }
            out = out.add(&acc.scale(c));
        }
        Ok(out)
    }

    /// T_w^{-1} = T_{s_{i_k}}^{-1} ⋯ T_{s_{i_1}}^{-1} T_{γ^{-1}}.
    pub fn t_inverse(&self, w: &AffineWeylElement) -> HeckeElem {
        if let Some(hit) = self.inverse_cache.lock().unwrap().get(w) {
            return hit.clone();
        }
        let (gamma, word) = self.aw.omega_decompose(w);
        let mut acc = self.unit();
        for &s in word.iter().rev() {
            acc = self.mul_gen_inverse(&acc, s);
        }
        let out = self.mul_omega(&acc, &self.aw.inv(&gamma));
        self.inverse_cache.lock().unwrap().insert(w.clone(), out.clone());
        out
    }

    /// T_w ↦ (−1)^{ℓ(w_fin)} q(w) T_{w^{-1}}^{-1}, extended linearly: an
    /// algebra automorphism of order two.
    pub fn star(&self, h: &HeckeElem) -> HeckeElem {
        let mut out = HeckeElem::zero();
        for (w, c) in &h.terms {
            let sign = if self.aw.w.length(w.fin) % 2 == 0 { 1 } else { -1 };
            let coeff = c.mul(&self.q_of(w)).scale(&crate::coefficients::int(sign));
            out = out.add(&self.t_inverse(&self.aw.inv(w)).scale(&coeff));
        }
        out
    }

    /// κ(T_w) = T_{w^{-1}}, extended linearly with coefficients fixed (the
    /// parameters are real, so coefficient conjugation is the identity).
    pub fn kappa(&self, h: &HeckeElem) -> HeckeElem {
        let mut out = HeckeElem::zero();
        for (w, c) in &h.terms {
            out.add_term(self.aw.inv(w), c.clone());
        }
        out
    }

    fn dominant_split(&self, x: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let d = self.datum();
        let k = d.dominant_shift_steps(x);
        let shift: Vec<i64> = d.two_rho.iter().map(|&c| c * k).collect();
        let x1: Vec<i64> = x.iter().zip(&shift).map(|(&a, &b)| a + b).collect();
        (x1, shift)
    }

    /// θ_x = q(t_{x₁})^{-1/2} T_{t_{x₁}} · (q(t_{x₂})^{-1/2} T_{t_{x₂}})^{-1}
    /// for any x = x₁ − x₂ with both parts dominant.
    pub fn theta(&self, x: &[i64]) -> HeckeElem {
        if let Some(hit) = self.theta_cache.lock().unwrap().get(x) {
            return hit.clone();
        }
        let out = self.theta_shifted(x, 0);
        self.theta_cache.lock().unwrap().insert(x.to_vec(), out.clone());
        out
    }

    /// Same, with the dominant decomposition pushed `extra` steps further —
    /// the result must not depend on it.
    pub fn theta_shifted(&self, x: &[i64], extra: i64) -> HeckeElem {
        let d = self.datum();
        let k = d.dominant_shift_steps(x) + extra;
        let x2: Vec<i64> = d.two_rho.iter().map(|&c| c * k).collect();
        let x1: Vec<i64> = x.iter().zip(&x2).map(|(&a, &b)| a + b).collect();
        debug_assert!(d.is_dominant(&x1) && d.is_dominant(&x2));
        let q1 = self.q_of(&self.aw.translation(&x1));
        let q2 = self.q_of(&self.aw.translation(&x2));
        let mono = q2
            .sqrt_monomial()
            .and_then(|a| Ok(a.mul(&q1.sqrt_monomial()?.invert_monomial()?)))
            .expect("q(t_x) is an invertible monomial");
        let prod = self
            .mul(
                &self.t_basis(&self.aw.translation(&x1)),
                &self.t_inverse(&self.aw.translation(&x2)),
            )
            .expect("same algebra");
        prod.scale(&mono)
    }

    /// T̄_x = T_{t_{x+μ}} T_{t_μ}^{-1} with μ dominant and x + μ dominant;
    /// independent of the choice of μ.
    pub fn tbar(&self, x: &[i64]) -> HeckeElem {
        self.tbar_shifted(x, 0)
    }

    pub fn tbar_shifted(&self, x: &[i64], extra: i64) -> HeckeElem {
        let d = self.datum();
        let k = d.dominant_shift_steps(x) + extra;
        let mu: Vec<i64> = d.two_rho.iter().map(|&c| c * k).collect();
        let x_plus_mu: Vec<i64> = x.iter().zip(&mu).map(|(&a, &b)| a + b).collect();
        debug_assert!(d.is_dominant(&mu) && d.is_dominant(&x_plus_mu));
        self.mul(
            &self.t_basis(&self.aw.translation(&x_plus_mu)),
            &self.t_inverse(&self.aw.translation(&mu)),
        )
        .expect("same algebra")
    }

    /// T̄_w = T_{w_fin} T̄_x for w = w_fin t_x.
    pub fn tbar_ext(&self, w: &AffineWeylElement) -> HeckeElem {
        self.mul(&self.t_finite(w.fin), &self.tbar(&w.trans)).expect("same algebra")
    }

    // ---- the {T_v θ_x} presentation ----

    pub fn bl_unit(&self) -> BlElem {
        let mut out = BlElem::zero();
        out.add_term((self.aw.w.identity(), vec![0; self.aw.rank()]), self.poly_one());
        out
    }

    pub fn theta_bl(&self, x: &[i64]) -> BlElem {
        let mut out = BlElem::zero();
        out.add_term((self.aw.w.identity(), x.to_vec()), self.poly_one());
        out
    }

    /// Γ_s(x) with θ-support returned as a map {y ↦ coefficient}, satisfying
    /// θ_x T_s = T_s θ_{s(x)} + Γ_s(x).
    pub fn gamma_terms(&self, i: usize, x: &[i64]) -> Result<BTreeMap<Vec<i64>, LaurentPoly>> {
        let d = self.datum();
        let alpha = &d.roots[d.simple_root_index(i)];
        let k = d.pair(x, &alpha.covec);
        let mut out: BTreeMap<Vec<i64>, LaurentPoly> = BTreeMap::new();
        if k == 0 {
            return Ok(out);
        }
        let orbit = d.simple_orbit(i);
        let q_s = self.params.q_of_orbit(orbit);
        let c0 = q_s.sub(&self.poly_one());
        let mut push = |y: Vec<i64>, c: LaurentPoly| {
            if c.is_zero() {
                return;
            }
            let entry = out.entry(y).or_insert_with(|| LaurentPoly::zero(c.nvars));
            *entry = entry.add(&c);
        };
        // θ_x·θ_{−α}^j has exponent x − jα.
        let theta_exp = |j: i64| -> Vec<i64> {
            x.iter().zip(&alpha.vec).map(|(&xi, &ai)| xi - j * ai).collect()
        };
        if k % 2 == 0 {
            // (1 − t^k)/(1 − t²) = ±Σ t^{2j}; prefactor c0 + c1·t with
            // c1 = q^{(λ+λ*)/2} − q^{(λ−λ*)/2}.
            let v = self.params.v_of_orbit(orbit);
            let v_star = self.params.v_star_of_orbit(orbit);
            let g_plus = v.mul(&v_star);
            let g_minus = v.mul(&v_star.invert_monomial().expect("monomial"));
            let c1 = g_plus.sub(&g_minus);
            let (js, negate): (Vec<i64>, bool) = if k > 0 {
                ((0..k / 2).map(|j| 2 * j).collect(), false)
            } else {
                ((0..(-k) / 2).map(|j| k + 2 * j).collect(), true)
            };
            for j in js {
                let (a, b) = if negate { (c0.neg(), c1.neg()) } else { (c0.clone(), c1.clone()) };
                push(theta_exp(j), a);
                push(theta_exp(j + 1), b);
            }
        } else {
            // Odd pairing: the prefactor must factor as (q_s − 1)(1 + t),
            // which requires λ* = λ on this orbit.
            if !self.params.star_equals_lambda(orbit) {
                return Err(Error::NonPolynomialQuotient(format!(
                    "odd pairing {k} with distinct λ, λ* on orbit {orbit}"
                )));
            }
            let (js, negate): (Vec<i64>, bool) = if k > 0 {
                ((0..k).collect(), false)
            } else {
                ((k..0).collect(), true)
            };
            for j in js {
                push(theta_exp(j), if negate { c0.neg() } else { c0.clone() });
            }
        }
        Ok(out)
    }

    /// b · θ_y.
    pub fn bl_mul_theta(&self, b: &BlElem, y: &[i64]) -> BlElem {
        let mut out = BlElem::zero();
        for ((v, x), c) in &b.terms {
            let nx: Vec<i64> = x.iter().zip(y).map(|(&a, &b)| a + b).collect();
            out.add_term((*v, nx), c.clone());
        }
        out
    }

    /// b · T_{s_i} for a finite simple generator, using the commutation rule
    /// and the finite quadratic relation.
    pub fn bl_mul_finite_gen(&self, b: &BlElem, i: usize) -> Result<BlElem> {
        let w = &self.aw.w;
        let si = w.simple(i);
        let q_s = self.params.q_of_gen(i);
        let q_s_minus_1 = q_s.sub(&self.poly_one());
        let mut out = BlElem::zero();
        for ((v, x), c) in &b.terms {
            let sx = w.act_on_x(si, x);
            // T_v · T_s θ_{s(x)}
            let vs = w.mul(*v, si);
            if w.length(vs) > w.length(*v) {
                out.add_term((vs, sx.clone()), c.clone());
            } else {
                out.add_term((vs, sx.clone()), c.mul(&q_s));
                out.add_term((*v, sx), c.mul(&q_s_minus_1));
            }
            // T_v · Γ_s(x)
            for (y, d) in self.gamma_terms(i, x)? {
                out.add_term((*v, y), c.mul(&d));
            }
        }
        Ok(out)
    }

    fn bl_mul_finite_gen_inverse(&self, b: &BlElem, i: usize) -> Result<BlElem> {
        let q_inv = self.params.q_of_gen(i).invert_monomial().expect("q_s invertible");
        let one_minus = self.poly_one().sub(&q_inv);
        Ok(self.bl_mul_finite_gen(b, i)?.scale(&q_inv).sub(&b.scale(&one_minus)))
    }

    /// b · T_s for any S_aff generator; s0 factors as
    /// T_{s0} = q(t_{α0})^{1/2} θ_{α0} T_{s_{α0}}^{-1}.
    pub fn bl_mul_gen(&self, b: &BlElem, s: usize) -> Result<BlElem> {
        if s < self.aw.rank() {
            return self.bl_mul_finite_gen(b, s);
        }
        let d = self.datum();
        let alpha0 = d.roots[d.highest_short].vec.clone();
        let s_alpha0 = self.aw.w.reflection(d.highest_short);
        let mono = self
            .q_of(&self.aw.translation(&alpha0))
            .sqrt_monomial()
            .expect("q monomial");
        let mut acc = self.bl_mul_theta(b, &alpha0);
        let word = self.aw.w.word(s_alpha0).to_vec();
        for &letter in word.iter().rev() {
            acc = self.bl_mul_finite_gen_inverse(&acc, letter)?;
        }
        Ok(acc.scale(&mono))
    }

    /// Expand onto {T_v θ_x}: seed each T_w with its length-zero part
    /// T_γ = q(t_{μ+m})^{1/2} q(t_m)^{-1/2} T_{w_Ω} θ_μ (γ = w_Ω t_μ, m a
    /// dominant shift making μ + m dominant), then push the reduced word
    /// through generator by generator.
    pub fn bl_from_im(&self, h: &HeckeElem) -> Result<BlElem> {
        self.check_compatible(h)?;
        let _d = self.datum();
        let mut out = BlElem::zero();
        for (w, c) in &h.terms {
            let (gamma, word) = self.aw.omega_decompose(w);
            let (mu_plus_m, m) = self.dominant_split(&gamma.trans);
            let q_num = self.q_of(&self.aw.translation(&mu_plus_m));
            let q_den = self.q_of(&self.aw.translation(&m));
            let mono = q_num
                .sqrt_monomial()
                .and_then(|a| Ok(a.mul(&q_den.sqrt_monomial()?.invert_monomial()?)))
                .expect("q monomials");
            let mut acc = BlElem::zero();
            acc.add_term((gamma.fin, gamma.trans.clone()), c.mul(&mono));
            for &s in &word {
                acc = self.bl_mul_gen(&acc, s)?;
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Contract {T_v θ_x} back to the standard basis.
    pub fn bl_to_im(&self, b: &BlElem) -> Result<HeckeElem> {
        let mut out = HeckeElem::zero();
        for ((v, x), c) in &b.terms {
            let term = self.mul(&self.t_finite(*v), &self.theta(x))?;
            out = out.add(&term.scale(c));
        }
        Ok(out)
    }

    /// The monomial q^{L/2} with T̄_x = q^{L/2}·θ_x, computed by expanding
    /// T̄_x on the {T_v θ_x} basis rather than transcribing the exponent
    /// function from the literature.
    pub fn tbar_theta_monomial(&self, x: &[i64]) -> Result<LaurentPoly> {
        let bl = self.bl_from_im(&self.tbar(x))?;
        if bl.terms.len() != 1 {
            return Err(Error::NonPolynomialQuotient(
                "T̄_x did not reduce to a single θ-term".to_string(),
            ));
        }
        let ((v, y), c) = bl.terms.iter().next().unwrap();
        if *v != self.aw.w.identity() || y != x || !c.is_monomial() {
            return Err(Error::NonPolynomialQuotient(
                "T̄_x is not a monomial multiple of θ_x".to_string(),
            ));
        }
        Ok(c.clone())
    }
}
